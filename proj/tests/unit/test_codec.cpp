#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "treesketch/codec.hpp"
#include "treesketch/errors.hpp"
#include "treesketch/metrics.hpp"

using namespace treesketch;

namespace {

void check_same(const TreeParams& a, const TreeParams& b) {
  const auto& reg = ParamRegistry::standard();
  for (const auto& s : reg.entries()) {
    CAPTURE(s.name);
    if (s.kind == ValueKind::Enum) {
      CHECK(a.label(s.name) == b.label(s.name));
      continue;
    }
    for (std::size_t l = 0; l < (s.per_level() ? kLevelCount : 1); ++l) {
      const double x = numeric_value(a, s, l), y = numeric_value(b, s, l);
      if (s.discrete())
        CHECK(x == y);
      else
        CHECK(std::abs(x - y) <= 1e-6 * std::max(1.0, std::abs(y)));
    }
  }
}

}  // namespace

TEST_CASE("encode lays out a 4 x 62 matrix in registry order") {
  const auto p = fixtures::random_params(1);
  const auto m = encode(p);
  const auto& reg = ParamRegistry::standard();
  REQUIRE(m.cols() == 62);
  CHECK(m.data.size() == 4 * 62);
  for (std::size_t c = 0; c < m.cols(); ++c) CHECK(m.keys[c] == reg.entries()[c].name);
  const auto sign = reg.index_of(pn::kSign);
  for (std::size_t r = 0; r < 4; ++r) CHECK(m.at(r, sign) == (p.scalar(pn::kSign) > 0 ? 1.0 : 0.0));
  const auto ratio = reg.index_of(pn::kRatio);
  for (std::size_t r = 0; r < 4; ++r) CHECK(m.at(r, ratio) == p.scalar(pn::kRatio));
  const auto taper = reg.index_of(pn::kTaper);
  for (std::size_t r = 0; r < 4; ++r) CHECK(m.at(r, taper) == p.level(pn::kTaper, r));
}

TEST_CASE("encode lists every missing parameter") {
  auto p = fixtures::random_params(2);
  p.erase(pn::kRatio);
  p.erase(pn::kLeaves);
  CHECK_THROWS_WITH_AS(encode(p), doctest::Contains("'Leaves'"), ValidationError);
  CHECK_THROWS_WITH_AS(encode(p), doctest::Contains("'Ratio'"), ValidationError);
}

TEST_CASE("group split partitions the columns and merges back") {
  const auto m = encode(fixtures::random_params(3));
  const auto b = split_groups(m);
  CHECK(b.total_cols() == 62);
  const auto& reg = ParamRegistry::standard();
  for (auto g : kAllGroups) {
    CHECK(b.group(g).cols() == reg.group_count(g));
    for (const auto& k : b.group(g).keys) CHECK(reg.at(k).group == g);
  }
  CHECK(merge(b) == m);
  auto broken = b;
  broken.group(MagnitudeGroup::Angle).keys.clear();
  broken.group(MagnitudeGroup::Angle).data.clear();
  CHECK_THROWS_AS(merge(broken), ValidationError);
}

TEST_CASE("decode snaps discrete columns and clamps continuous ones") {
  const auto p = fixtures::random_params(4);
  auto b = split_groups(encode(p));
  auto& bounded = b.group(MagnitudeGroup::Bounded);
  for (std::size_t k = 0; k < bounded.cols(); ++k) {
    if (bounded.keys[k] == pn::kLevels) bounded.at(0, k) = 2.4;
    if (bounded.keys[k] == pn::kShape) bounded.at(0, k) = 42.0;
  }
  auto& unit = b.group(MagnitudeGroup::UnitInterval);
  for (std::size_t k = 0; k < unit.cols(); ++k) {
    if (unit.keys[k] == pn::kRatio) unit.at(0, k) = 1.7;
    if (unit.keys[k] == pn::kSign) unit.at(0, k) = 0.2;
  }
  const auto d = decode(b);
  CHECK(validate(d).empty());
  CHECK(d.scalar(pn::kLevels) == 2.0);
  CHECK(d.label(pn::kShape) == "custom");
  CHECK(d.scalar(pn::kRatio) == 1.0);
  CHECK(d.scalar(pn::kSign) == -1.0);

  b.group(MagnitudeGroup::Bounded).data[0] = std::nan("");
  CHECK_THROWS_WITH_AS(decode(b), doctest::Contains("unsnappable"), ValidationError);
}

TEST_CASE("max-abs normalization covers the open-ended groups only") {
  std::vector<TargetBundle> set;
  for (std::uint64_t s = 0; s < 10; ++s) set.push_back(split_groups(encode(fixtures::random_params(s))));
  const auto rec = build_record(set);
  const auto& reg = ParamRegistry::standard();
  CHECK(rec.max_abs.size() == reg.group_count(MagnitudeGroup::Angle) + reg.group_count(MagnitudeGroup::Unbounded));
  for (const auto& b : set) {
    const auto n = normalize(b, rec);
    for (auto g : kAllGroups) {
      if (is_normalized_group(g, false)) {
        for (double v : n.group(g).data) CHECK(std::abs(v) <= 1.0);
      } else {
        CHECK(n.group(g) == b.group(g));
      }
    }
    const auto back = denormalize(n, rec);
    for (std::size_t i = 0; i < back.groups.size(); ++i)
      for (std::size_t k = 0; k < back.groups[i].data.size(); ++k)
        CHECK(back.groups[i].data[k] == doctest::Approx(b.groups[i].data[k]).epsilon(1e-12));
  }
  const auto wide = build_record(set, true);
  CHECK(wide.max_abs.size() > rec.max_abs.size());
  CHECK(wide.max_abs.count(std::string(pn::kLeafScale)) == 1);
}

TEST_CASE("all-zero columns store a unit scale and bad records are refused") {
  auto p = fixtures::random_params(5);
  p.set(std::string(pn::kSplitBias), 0.0);
  const std::vector<TargetBundle> one{split_groups(encode(p))};
  auto rec = build_record(one);
  CHECK(rec.max_abs.at(std::string(pn::kSplitBias)) == 1.0);
  rec.max_abs[std::string(pn::kSplitBias)] = 0.0;
  CHECK_THROWS_WITH_AS(normalize(one[0], rec), doctest::Contains("unnormalizable column"), ValidationError);
  rec.max_abs.erase(std::string(pn::kSplitBias));
  CHECK_THROWS_AS(normalize(one[0], rec), ValidationError);
}

TEST_CASE("decode inverts encode") {
  for (std::uint64_t s = 0; s < 50; ++s) check_same(decode(split_groups(encode(fixtures::random_params(s)))), fixtures::random_params(s));
}

TEST_CASE("bundles and records survive JSON files") {
  const auto dir = fixtures::scratch_dir("codec");
  const auto b = split_groups(encode(fixtures::random_params(6)));
  save_bundle(b, dir / "b.json");
  CHECK(load_bundle(dir / "b.json") == b);
  const std::vector<TargetBundle> set{b};
  const auto rec = build_record(set, true);
  save_record(rec, dir / "r.json");
  CHECK(load_record(dir / "r.json") == rec);
  CHECK_THROWS_AS(bundle_from_json(nlohmann::json{{"groups", 3}}), ValidationError);
}

TEST_CASE("1-RMSE: identity, constant offset and the overall mean") {
  const auto b = split_groups(encode(fixtures::random_params(7)));
  const auto same = one_minus_rmse(b, b);
  for (double g : same.group) CHECK(g == 1.0);
  CHECK(same.overall == 1.0);

  // Dyadic data and offset keep every difference exact.
  auto gt = b;
  for (auto& g : gt.groups)
    for (std::size_t i = 0; i < g.data.size(); ++i) g.data[i] = double(i % 7) / 8.0;
  auto pred = gt;
  for (auto& g : pred.groups)
    for (double& v : g.data) v += 0.125;
  const auto off = one_minus_rmse(pred, gt);
  for (double g : off.group) CHECK(g == 1.0 - 0.125);
  CHECK(off.overall == 1.0 - 0.125);

  auto mixed = gt;
  mixed.groups[1].data[0] += 2.0;
  const auto r = one_minus_rmse(mixed, gt);
  double mean = 0;
  for (double g : r.group) mean += g;
  CHECK(r.overall == doctest::Approx(mean / 6).epsilon(1e-15));
  CHECK(r.group[1] < 1.0);

  auto wrong = gt;
  wrong.groups[0].keys.pop_back();
  CHECK_THROWS_AS(one_minus_rmse(wrong, gt), ValidationError);
}
