#include "treesketch/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "treesketch/errors.hpp"
#include "treesketch/param_io.hpp"
#include "treesketch/rng.hpp"
#include "treesketch/synthesis.hpp"

namespace treesketch {

std::string_view split_name(Split s) { return s == Split::Train ? "train" : "val"; }

namespace {
Split parse_split(std::string_view s) {
  if (s == "train") return Split::Train;
  if (s == "val") return Split::Validation;
  throw ValidationError("unknown split: " + std::string(s));
}
}  // namespace

std::size_t DatasetManifest::count(Split s) const {
  return static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(), [&](const SampleRecord& r) { return r.split == s; }));
}

std::uint64_t tree_seed(std::uint64_t global_seed, Species species, int tree) {
  return combine_seed(combine_seed(global_seed, hash_string(species_name(species))),
                      static_cast<std::uint64_t>(tree));
}

View validation_view(Species species, const std::vector<View>& views) {
  if (views.empty()) throw ValidationError("no views requested");
  return views[static_cast<std::size_t>(species) % views.size()];
}

std::string tree_directory(Species species, int tree) {
  char id[16];
  std::snprintf(id, sizeof id, "%04d", tree);
  return std::string(species_name(species)) + "/" + id;
}

namespace {

struct TreeJob {
  Species species;
  int tree;
};

const SpeciesProfile& profile_for(const GenerateOptions& o, Species s) {
  for (const auto& p : o.profiles)
    if (p.species == s) return p;
  return standard_profile(s);
}

struct TreeResult {
  TreeRecord record;
  std::vector<SampleRecord> samples;
  std::optional<TargetBundle> bundle;
};

TreeResult build_tree(const GenerateOptions& o, const TreeJob& job) {
  TreeResult r;
  r.record.species = job.species;
  r.record.tree = job.tree;
  r.record.seed = tree_seed(o.seed, job.species, job.tree);
  r.record.dir = tree_directory(job.species, job.tree);
  const std::filesystem::path dir = o.out / r.record.dir;

  const TreeParams params = randomize(profile_for(o, job.species), r.record.seed);
  const TreeMeshes meshes = grow_tree(params);
  Box3 box = meshes.skeleton.bounds();
  box.extend(meshes.foliage.bounds());

  std::filesystem::create_directories(dir);
  save_params(params, dir / "params.json");
  if (o.write_meshes) {
    save_obj(meshes.skeleton, dir / "skeleton.obj");
    save_obj(meshes.foliage, dir / "foliage.obj");
  }
  const View held_out = validation_view(job.species, o.views);
  for (View v : o.views) {
    const CameraView cam = canonical_camera(v, box);
    const std::string name(view_name(v));
    write_png(sketch_tree(meshes.skeleton, meshes.foliage, cam, o.resolution, o.sketch),
              dir / (name + ".sketch.png"));
    write_png(render_gt(meshes.skeleton, meshes.foliage, cam, o.resolution), dir / (name + ".gt.png"));
    r.samples.push_back({job.species, job.tree, v, v == held_out ? Split::Validation : Split::Train,
                         r.record.dir + "/" + name + ".sketch.png", r.record.dir + "/" + name + ".gt.png",
                         r.record.dir + "/params.json"});
  }
  r.bundle = split_groups(encode(params));
  return r;
}

}  // namespace

DatasetManifest generate_dataset(const GenerateOptions& o) {
  if (o.out.empty()) throw ValidationError("output directory required");
  if (o.trees_per_species < 0) throw ValidationError("tree count must be non-negative");
  if (o.resolution < 16) throw ValidationError("resolution must be at least 16");
  if (o.views.empty()) throw ValidationError("no views requested");
  if (o.species.empty()) throw ValidationError("no species requested");
  std::error_code ec;
  std::filesystem::create_directories(o.out, ec);
  if (ec) throw IoError("cannot create " + o.out.string() + ": " + ec.message());

  std::vector<TreeJob> jobs;
  for (Species s : o.species)
    for (int t = 0; t < o.trees_per_species; ++t) jobs.push_back({s, t});

  std::vector<TreeResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i; !abort && (i = next.fetch_add(1)) < jobs.size();) {
      try {
        results[i] = build_tree(o, jobs[i]);
      } catch (const std::exception& e) {
        results[i].record = {jobs[i].species, jobs[i].tree, tree_seed(o.seed, jobs[i].species, jobs[i].tree),
                             tree_directory(jobs[i].species, jobs[i].tree), std::string(e.what())};
        if (o.fail_fast) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          abort = true;
        }
      }
    }
  };
  unsigned n = o.workers ? o.workers : std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, static_cast<unsigned>(std::max<std::size_t>(1, jobs.size())));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  DatasetManifest m;
  m.species = o.species;
  m.trees_per_species = o.trees_per_species;
  m.views = o.views;
  m.resolution = o.resolution;
  m.seed = o.seed;
  m.normalization = "normalization.json";
  std::vector<TargetBundle> bundles;
  for (auto& r : results) {
    m.trees.push_back(r.record);
    for (auto& s : r.samples) m.samples.push_back(std::move(s));
    if (r.bundle) bundles.push_back(std::move(*r.bundle));
  }
  save_record(build_record(bundles, o.normalize_nonnegative), o.out / m.normalization);
  write_text(o.out / "manifest.json", manifest_to_json(m).dump(2) + "\n");
  return m;
}

nlohmann::json manifest_to_json(const DatasetManifest& m) {
  nlohmann::json species = nlohmann::json::array(), views = nlohmann::json::array();
  for (Species s : m.species) species.push_back(species_name(s));
  for (View v : m.views) views.push_back(view_name(v));
  nlohmann::json trees = nlohmann::json::array(), samples = nlohmann::json::array();
  for (const auto& t : m.trees) {
    nlohmann::json j = {{"species", species_name(t.species)}, {"tree", t.tree}, {"seed", t.seed}, {"dir", t.dir}};
    if (t.error) j["error"] = *t.error;
    trees.push_back(std::move(j));
  }
  for (const auto& s : m.samples)
    samples.push_back({{"species", species_name(s.species)},
                       {"tree", s.tree},
                       {"view", view_name(s.view)},
                       {"split", split_name(s.split)},
                       {"sketch", s.sketch},
                       {"gt", s.gt},
                       {"params", s.params}});
  return {{"version", m.version},
          {"species", species},
          {"trees_per_species", m.trees_per_species},
          {"views", views},
          {"resolution", m.resolution},
          {"seed", m.seed},
          {"normalization", m.normalization},
          {"sample_count", m.samples.size()},
          {"train_count", m.count(Split::Train)},
          {"validation_count", m.count(Split::Validation)},
          {"trees", trees},
          {"samples", samples}};
}

DatasetManifest manifest_from_json(const nlohmann::json& j) {
  try {
    DatasetManifest m;
    m.version = j.value("version", 1);
    for (const auto& s : j.at("species")) m.species.push_back(parse_species(s.get<std::string>()));
    m.trees_per_species = j.at("trees_per_species").get<int>();
    for (const auto& v : j.at("views")) m.views.push_back(parse_view(v.get<std::string>()));
    m.resolution = j.at("resolution").get<int>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.normalization = j.at("normalization").get<std::string>();
    for (const auto& t : j.at("trees")) {
      TreeRecord r{parse_species(t.at("species").get<std::string>()), t.at("tree").get<int>(),
                   t.at("seed").get<std::uint64_t>(), t.at("dir").get<std::string>(), std::nullopt};
      if (t.contains("error")) r.error = t["error"].get<std::string>();
      m.trees.push_back(std::move(r));
    }
    for (const auto& s : j.at("samples"))
      m.samples.push_back({parse_species(s.at("species").get<std::string>()), s.at("tree").get<int>(),
                           parse_view(s.at("view").get<std::string>()), parse_split(s.at("split").get<std::string>()),
                           s.at("sketch").get<std::string>(), s.at("gt").get<std::string>(),
                           s.at("params").get<std::string>()});
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed manifest: ") + e.what());
  }
}

DatasetManifest load_manifest(const std::filesystem::path& path) { return manifest_from_json(read_json(path)); }

Reconstruction reconstruct(const std::filesystem::path& params_file, const std::filesystem::path& skeleton_obj,
                           const std::filesystem::path& foliage_obj) {
  const TreeParams params = load_params(params_file);
  const TreeMeshes meshes = grow_tree(params);
  save_obj(meshes.skeleton, skeleton_obj);
  save_obj(meshes.foliage, foliage_obj);

  Reconstruction r;
  nlohmann::json side = {{"params", params_file.string()},
                         {"skeleton", skeleton_obj.string()},
                         {"foliage", foliage_obj.string()}};
  try {
    r.species = identify(params);
    r.texture = texture_for(r.species->species).id();
    side["species"] = species_name(r.species->species);
    side["eligibility"] = r.species->percentage;
    side["texture"] = *r.texture;
    if (r.species->tied.size() > 1) {
      nlohmann::json tied = nlohmann::json::array();
      for (Species s : r.species->tied) tied.push_back(species_name(s));
      side["tied"] = tied;
    }
  } catch (const ValidationError& e) {
    r.note = e.what();
    side["species"] = nullptr;
    side["note"] = r.note;
  }
  std::filesystem::path sidecar = skeleton_obj;
  sidecar.replace_extension(".meta.json");
  write_text(sidecar, side.dump(2) + "\n");
  return r;
}

}  // namespace treesketch
