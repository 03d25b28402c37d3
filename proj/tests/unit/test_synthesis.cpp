#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "treesketch/errors.hpp"
#include "treesketch/species_profile.hpp"
#include "treesketch/synthesis.hpp"

using namespace treesketch;

namespace {

TreeParams maple(std::uint64_t seed = 1) { return randomize(standard_profile(Species::Maple), seed); }

TreeParams single_trunk(double seg_splits) {
  auto p = maple();
  p.set(std::string(pn::kLevels), 1.0);
  p.set(std::string(pn::kTreeForks), 0.0);
  p.set(std::string(pn::kSplitHeight), 0.0);
  p.set(std::string(pn::kSplitBias), 0.0);
  p.set(std::string(pn::kCurveResolution), std::vector<double>{12, 1, 1, 1});
  p.set(std::string(pn::kSegmentSplits), std::vector<double>{seg_splits, 0, 0, 0});
  return p;
}

}  // namespace

TEST_CASE("trunk radius matches direct evaluation") {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const double len = rng.uniform(0.1, 30), ratio = rng.uniform(0.001, 0.2);
    const double s0 = rng.uniform(0.5, 2), sv = rng.uniform(0, 0.4), draw = rng.signed_unit();
    CHECK(trunk_radius(len, ratio, s0, sv, draw) == len * ratio * (s0 + draw * sv));
  }
  CHECK_THROWS_AS(trunk_radius(1.0, 0.0, 1.0, 0.0, 0.0), ValidationError);
  CHECK_THROWS_AS(trunk_radius(1.0, 0.1, 0.2, 0.5, -1.0), ValidationError);
}

TEST_CASE("child radius follows the length ratio power and clamps") {
  CHECK(child_radius(1.0, 0.5, 1.0, 2.0, 1.0, 0.0) == doctest::Approx(0.25));
  CHECK(child_radius(1.0, 0.5, 1.0, 2.0, 1.0, 0.3) == 0.3);
  CHECK(child_radius(0.4, 2.0, 4.0, 1.0, 0.5, 0.0) == doctest::Approx(0.1));
}

TEST_CASE("split count diffuses fractional requests") {
  CHECK(split_count(0.0, 0.0).stems() == 1);
  CHECK(split_count(1.0, 0.0).stems() == 2);
  CHECK(split_count(2.0, 0.0).stems() == 3);
  CHECK(split_count(5.0, 0.0).splits == 3);
  double err = 0.0;
  int total = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto d = split_count(0.25, err);
    err = d.error;
    total += d.splits;
    CHECK(std::abs(err) <= 0.5);
  }
  CHECK(total == 250);
}

TEST_CASE("shape ratio stays positive and custom shapes pick the level entry") {
  for (const char* name : {"conical", "spherical", "hemispherical", "cylindrical", "tapered_cylindrical",
                           "flame", "inverse_conical", "tend_flame", "envelope"}) {
    for (int i = 0; i <= 20; ++i) CHECK(shape_ratio(parse_shape(name), 1, i / 20.0) > 0.0);
  }
  const double custom[] = {0.1, 0.2, 0.3, 0.4};
  CHECK(shape_ratio(TreeShape::Custom, 2, 0.5, custom) == 0.3);
  CHECK(shape_ratio(TreeShape::Cylindrical, 1, 0.3) == 1.0);
  CHECK_THROWS_AS(parse_shape("cubic"), ValidationError);
}

TEST_CASE("growth is deterministic and seed sensitive") {
  const auto p = maple();
  const auto a = grow_tree(p, 3), b = grow_tree(p, 3), c = grow_tree(p, 4);
  CHECK(a.skeleton.vertices == b.skeleton.vertices);
  CHECK(a.foliage.vertices == b.foliage.vertices);
  CHECK_FALSE(a.skeleton.vertices == c.skeleton.vertices);
  CHECK(grow_tree(p).skeleton.vertices ==
        grow_tree(p, static_cast<std::uint64_t>(p.scalar(pn::kRandomSeed))).skeleton.vertices);
}

TEST_CASE("stems respect level, parentage and radius invariants") {
  for (auto species : kAllSpecies) {
    const auto p = randomize(standard_profile(species), 2);
    const auto t = grow_structure(p, 2);
    CAPTURE(species_name(species));
    REQUIRE_FALSE(t.stems.empty());
    CHECK(t.stems[0].level == 0);
    CHECK(t.trunk_length > 0.0);
    const int levels = p.integer(pn::kLevels);
    for (const auto& s : t.stems) {
      CHECK(s.level < levels);
      CHECK(s.radii.size() == s.control_points.size());
      if (s.parent) {
        CHECK(*s.parent < t.stems.size());
        CHECK(t.stems[*s.parent].level == s.level - 1);
      }
      for (std::size_t k = 1; k < s.radii.size(); ++k) CHECK(s.radii[k] <= s.radii[k - 1] + 1e-12);
      for (double r : s.radii) CHECK(r >= s.min_radius);
    }
    for (const auto& leaf : t.leaves) {
      CHECK(t.stems[leaf.stem].level == levels - 1);
      CHECK(leaf.length >= 0.0);
    }
  }
}

TEST_CASE("split events emit one stem per requested split plus the continuation") {
  for (double s : {1.0, 2.0}) {
    const auto t = grow_structure(single_trunk(s), 7);
    REQUIRE_FALSE(t.splits.empty());
    for (const auto& ev : t.splits) CHECK(ev.directions.size() == static_cast<std::size_t>(s) + 1);
    std::size_t clones = 0;
    for (const auto& st : t.stems) clones += st.clone ? 1 : 0;
    CHECK(clones == t.splits.size() * static_cast<std::size_t>(s));
  }
  const auto none = grow_structure(single_trunk(0.0), 7);
  CHECK(none.splits.empty());
  CHECK(none.stems.size() == 1);
}

TEST_CASE("sibling angle sets the angle between split directions and the stem") {
  auto p = single_trunk(1.0);
  p.set(std::string(pn::kSiblingAngle), std::vector<double>{30, 0, 0, 0});
  p.set(std::string(pn::kSiblingAngleVariance), std::vector<double>{0, 0, 0, 0});
  const auto t = grow_structure(p, 11);
  REQUIRE_FALSE(t.splits.empty());
  for (const auto& ev : t.splits)
    for (const auto& d : ev.directions) CHECK(norm(d) == doctest::Approx(1.0));
  const auto& ev = t.splits.front();
  // Both directions sit 30 degrees off the pre-split axis, on opposite sides.
  CHECK(degrees(angle_between(ev.directions[0], ev.directions[1])) == doctest::Approx(60.0).epsilon(1e-9));
}

TEST_CASE("tree forks split the trunk at the base") {
  auto p = single_trunk(0.0);
  p.set(std::string(pn::kTreeForks), 1.0);
  const auto t = grow_structure(p, 1);
  REQUIRE(t.splits.size() == 1);
  CHECK(t.splits[0].directions.size() == 2);
}

TEST_CASE("invalid or degenerate dictionaries are rejected") {
  auto p = maple();
  p.set(std::string(pn::kLength), std::vector<double>{0, 0.3, 0.5, 0});
  CHECK_THROWS_WITH_AS(grow_tree(p, 1), "degenerate tree", ValidationError);
  auto q = maple();
  q.erase(pn::kRatio);
  CHECK_THROWS_AS(grow_tree(q, 1), ValidationError);
  auto r = maple();
  r.set(std::string(pn::kLevels), 4.0);
  r.set(std::string(pn::kBranches), std::vector<double>{0, 1000, 1000, 1000});
  CHECK_THROWS_WITH_AS(grow_structure(r, 1), doctest::Contains("too complex"), ValidationError);
}

TEST_CASE("meshes are closed over their vertices and carry axis points") {
  const auto m = grow_tree(maple(), 5);
  CHECK(m.skeleton.axis_points.size() == m.skeleton.vertices.size());
  for (const auto& tri : m.skeleton.triangles)
    for (auto i : tri) CHECK(i < m.skeleton.vertices.size());
  CHECK_FALSE(m.foliage.empty());
  auto bare = maple();
  bare.set(std::string(pn::kShowLeaves), 0.0);
  CHECK(grow_tree(bare, 5).foliage.empty());
}
