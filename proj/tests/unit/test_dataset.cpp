#include <doctest.h>

#include <fstream>
#include <iterator>
#include <set>

#include "fixtures.hpp"
#include "treesketch/dataset.hpp"
#include "treesketch/errors.hpp"
#include "treesketch/metrics.hpp"
#include "treesketch/param_io.hpp"
#include "treesketch/synthesis.hpp"

using namespace treesketch;
namespace fs = std::filesystem;

namespace {

GenerateOptions small(const fs::path& out, std::uint64_t seed = 5) {
  GenerateOptions o;
  o.species = {Species::Maple, Species::Palm};
  o.trees_per_species = 2;
  o.resolution = 64;
  o.seed = seed;
  o.out = out;
  o.workers = 2;
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("tree seeds are independent per species and index") {
  std::set<std::uint64_t> seeds;
  for (auto s : kAllSpecies)
    for (int t = 0; t < 50; ++t) seeds.insert(tree_seed(1, s, t));
  CHECK(seeds.size() == 250);
  CHECK(tree_seed(1, Species::Pine, 3) == tree_seed(1, Species::Pine, 3));
  CHECK(tree_seed(1, Species::Pine, 3) != tree_seed(2, Species::Pine, 3));
  CHECK(tree_directory(Species::Cherry, 7) == "cherry/0007");
}

TEST_CASE("each species holds out exactly one view") {
  const std::vector<View> views(kAllViews.begin(), kAllViews.end());
  std::set<View> used;
  for (auto s : kAllSpecies) used.insert(validation_view(s, views));
  CHECK(used.size() == 4);
  CHECK_THROWS_AS(validation_view(Species::Maple, {}), ValidationError);
}

TEST_CASE("generate writes every artifact the manifest lists") {
  const auto dir = fixtures::scratch_dir("dataset");
  const auto m = generate_dataset(small(dir));
  CHECK(m.samples.size() == 2 * 2 * 4);
  CHECK(m.count(Split::Validation) == 2 * 2);
  CHECK(m.count(Split::Train) == 2 * 2 * 3);
  for (const auto& s : m.samples) {
    const auto img = read_png(dir / s.sketch);
    CHECK(img.width() == 64);
    CHECK(img.height() == 64);
    CHECK(img.binary());
    CHECK(fs::exists(dir / s.gt));
    CHECK(validate(load_params(dir / s.params)).empty());
    CHECK((s.split == Split::Validation) == (s.view == validation_view(s.species, m.views)));
  }
  for (const auto& t : m.trees) {
    CHECK_FALSE(t.error);
    CHECK(fs::exists(dir / t.dir / "skeleton.obj"));
  }
  CHECK(fs::exists(dir / "normalization.json"));
  const auto loaded = load_manifest(dir / "manifest.json");
  CHECK(manifest_to_json(loaded) == manifest_to_json(m));
}

TEST_CASE("generate is byte reproducible and per-tree independent") {
  const auto a = fixtures::scratch_dir("dataset_a"), b = fixtures::scratch_dir("dataset_b");
  auto oa = small(a), ob = small(b);
  ob.workers = 1;
  ob.trees_per_species = 3;
  const auto ma = generate_dataset(oa);
  generate_dataset(ob);
  for (const auto& s : ma.samples) {
    CHECK(slurp(a / s.sketch) == slurp(b / s.sketch));
    CHECK(slurp(a / s.gt) == slurp(b / s.gt));
    CHECK(slurp(a / s.params) == slurp(b / s.params));
  }
  CHECK(slurp(a / "maple/0000/skeleton.obj") == slurp(b / "maple/0000/skeleton.obj"));
}

TEST_CASE("failing trees are recorded and skipped unless fail-fast") {
  const auto dir = fixtures::scratch_dir("dataset_fail");
  auto o = small(dir);
  auto broken = standard_profile(Species::Palm);
  broken.fixed.set(std::string(pn::kLength), std::vector<double>{0, 0.3, 0, 0});
  o.profiles = {broken};
  const auto m = generate_dataset(o);
  CHECK(m.samples.size() == 2 * 4);
  std::size_t failed = 0;
  for (const auto& t : m.trees) {
    if (t.species == Species::Palm) {
      REQUIRE(t.error);
      CHECK(*t.error == "degenerate tree");
      CHECK(t.seed == tree_seed(o.seed, t.species, t.tree));
      ++failed;
    }
  }
  CHECK(failed == 2);
  o.fail_fast = true;
  CHECK_THROWS_AS(generate_dataset(o), ValidationError);
}

TEST_CASE("generate rejects bad options") {
  auto o = small(fixtures::scratch_dir("dataset_bad"));
  o.resolution = 8;
  CHECK_THROWS_AS(generate_dataset(o), ValidationError);
  o = small({});
  CHECK_THROWS_AS(generate_dataset(o), ValidationError);
}

TEST_CASE("reconstruct reproduces stored meshes and records the species") {
  const auto dir = fixtures::scratch_dir("reconstruct");
  auto o = small(dir);
  o.trees_per_species = 1;
  generate_dataset(o);
  const auto r = reconstruct(dir / "palm/0000/params.json", dir / "palm.skeleton.obj", dir / "palm.foliage.obj");
  REQUIRE(r.species);
  CHECK(r.species->species == Species::Palm);
  CHECK(slurp(dir / "palm.skeleton.obj") == slurp(dir / "palm/0000/skeleton.obj"));
  HausdorffOptions h;
  h.sampling = Sampling::Vertices;
  CHECK(hausdorff(load_obj(dir / "palm.foliage.obj"), load_obj(dir / "palm/0000/foliage.obj"), h) == 0.0);
  const auto side = read_json(dir / "palm.skeleton.meta.json");
  CHECK(side["species"] == "palm");
  CHECK(side["texture"] == texture_for(Species::Palm).id());

  auto odd = load_params(dir / "palm/0000/params.json");
  odd.set(std::string(pn::kShape), std::string("flame"));
  odd.set(std::string(pn::kLevels), 1.0);
  odd.set(std::string(pn::kTrunkHeight), 0.77);
  odd.set(std::string(pn::kLeafShape), std::string("dupliface"));
  odd.set(std::string(pn::kBranches), std::vector<double>{0, 3, 0, 0});
  save_params(odd, dir / "odd.json");
  const auto none = reconstruct(dir / "odd.json", dir / "odd.skeleton.obj", dir / "odd.foliage.obj");
  CHECK_FALSE(none.species);
  CHECK(read_json(dir / "odd.skeleton.meta.json")["species"].is_null());

  std::ofstream(dir / "corrupt.json") << "{\"Ratio\": ";
  CHECK_THROWS(reconstruct(dir / "corrupt.json", dir / "c.obj", dir / "c2.obj"));
}
