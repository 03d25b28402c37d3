#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "treesketch/codec.hpp"
#include "treesketch/dataset.hpp"
#include "treesketch/errors.hpp"
#include "treesketch/metrics.hpp"
#include "treesketch/nn_baseline.hpp"
#include "treesketch/param_io.hpp"
#include "treesketch/raster.hpp"
#include "treesketch/sketch.hpp"
#include "treesketch/species_id.hpp"
#include "treesketch/synthesis.hpp"

namespace ts = treesketch;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kIo = 3 };

std::vector<std::string> split_list(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    std::stringstream ss(item);
    for (std::string part; std::getline(ss, part, ',');)
      if (!part.empty()) out.push_back(part);
  }
  return out;
}

void emit(const nlohmann::json& j, const std::string& out) {
  if (out.empty() || out == "-")
    std::cout << j.dump(2) << "\n";
  else
    ts::write_text(out, j.dump(2) + "\n");
}

struct UsageError : ts::Error {
  using Error::Error;
};

// Loads a parameter file and reports every violation at once.
ts::TreeParams load_valid_params(const fs::path& path) {
  ts::TreeParams p = ts::load_params(path);
  const auto violations = ts::validate(p);
  if (violations.empty()) return p;
  std::string msg = path.string() + ": " + std::to_string(violations.size()) + " violation(s)";
  for (const auto& v : violations) msg += "\n  " + ts::describe(v);
  throw ts::ValidationError(msg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Procedural tree parameters, meshes, sketches and metrics"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a synthetic sketch dataset");
  std::vector<std::string> species_arg, views_arg;
  int count = ts::kDeskTreesPerSpecies, resolution = ts::kDefaultResolution;
  std::uint64_t seed = 0;
  std::string out;
  bool paper_scale = false, fail_fast = false, no_meshes = false, norm_nonneg = false;
  unsigned workers = 0;
  gen->add_option("--species", species_arg, "Species (comma separated)");
  auto* count_opt = gen->add_option("--count", count, "Trees per species");
  gen->add_option("--views", views_arg, "Views (comma separated)");
  gen->add_option("--resolution", resolution, "Render side in pixels")->check(CLI::Range(16, 8192));
  gen->add_option("--seed", seed, "Global seed");
  gen->add_option("--out", out, "Output directory")->required();
  gen->add_flag("--paper-scale", paper_scale, "250 trees per species")->excludes(count_opt);
  gen->add_flag("--fail-fast", fail_fast, "Stop at the first failing tree");
  gen->add_flag("--no-meshes", no_meshes, "Skip OBJ output");
  gen->add_flag("--normalize-nonnegative", norm_nonneg, "Also max-abs scale the [0,inf] group");
  gen->add_option("--workers", workers, "Worker threads (0 = hardware)");

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct", "Grow meshes from a parameter file");
  std::string params_in, skeleton_path, foliage_path;
  rec->add_option("--params", params_in, "Parameter file")->required();
  rec->add_option("--skeleton", skeleton_path, "Skeleton OBJ output")->required();
  rec->add_option("--foliage", foliage_path, "Foliage OBJ output")->required();

  // sketch
  auto* sk = app.add_subcommand("sketch", "Render a sketch from meshes or a parameter file");
  std::string view_arg = "front", gt_out;
  sk->add_option("--params", params_in, "Parameter file (instead of meshes)");
  sk->add_option("--skeleton", skeleton_path, "Skeleton OBJ");
  sk->add_option("--foliage", foliage_path, "Foliage OBJ");
  sk->add_option("--view", view_arg, "front, back, left or right");
  sk->add_option("--resolution", resolution, "Render side in pixels")->check(CLI::Range(16, 8192));
  sk->add_option("--out", out, "Sketch PNG")->required();
  sk->add_option("--gt", gt_out, "Also write the ground-truth render");

  // encode / decode
  auto* enc = app.add_subcommand("encode", "Parameter file -> target bundle");
  std::string norm_path, bundle_path;
  enc->add_option("--params", params_in, "Parameter file")->required();
  enc->add_option("--normalization", norm_path, "Normalization record (normalizes the bundle)");
  enc->add_option("--out", out, "Bundle output (stdout if omitted)");
  auto* dec = app.add_subcommand("decode", "Target bundle -> parameter file");
  dec->add_option("--bundle", bundle_path, "Bundle file")->required();
  dec->add_option("--normalization", norm_path, "Normalization record (bundle is normalized)");
  dec->add_option("--out", out, "Parameter output (stdout if omitted)");

  // identify
  auto* ident = app.add_subcommand("identify", "Detect the species of a parameter file");
  ident->add_option("--params", params_in, "Parameter file")->required();

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "1-RMSE between parameter files or HDD between meshes");
  std::string pred, gt, pred_mesh, gt_mesh, pred_bundle, gt_bundle;
  std::size_t samples = 10000;
  bool one_sided = false, vertices_only = false, raw_scale = false;
  ev->add_option("--pred", pred, "Predicted parameter file");
  ev->add_option("--gt", gt, "Ground-truth parameter file");
  ev->add_option("--pred-bundle", pred_bundle, "Predicted (normalized) bundle");
  ev->add_option("--gt-bundle", gt_bundle, "Ground-truth (normalized) bundle");
  ev->add_option("--pred-mesh", pred_mesh, "Predicted mesh OBJ");
  ev->add_option("--gt-mesh", gt_mesh, "Ground-truth mesh OBJ");
  ev->add_option("--normalization", norm_path, "Normalization record for parameter mode");
  ev->add_option("--samples", samples, "Surface samples per mesh");
  ev->add_option("--seed", seed, "Sampling seed");
  ev->add_flag("--one-sided", one_sided, "Directed distance pred -> gt only");
  ev->add_flag("--vertices", vertices_only, "Use mesh vertices only");
  ev->add_flag("--no-normalize", raw_scale, "Measure in scene units");
  ev->add_option("--out", out, "Report output (stdout if omitted)");

  // sweep
  auto* sw = app.add_subcommand("sweep", "Rotation experiment: HDD per rotation step");
  std::string index_path, plot_path;
  int step = 5;
  bool oracle = false;
  sw->add_option("--params", params_in, "Ground-truth parameter file")->required();
  sw->add_option("--index", index_path, "Sketch index used as predictor");
  sw->add_flag("--oracle", oracle, "Predict the ground truth itself");
  sw->add_option("--step", step, "Degrees per step");
  sw->add_option("--resolution", resolution, "Render side in pixels")->check(CLI::Range(16, 8192));
  sw->add_option("--samples", samples, "Surface samples per mesh");
  sw->add_option("--out", out, "Report output (stdout if omitted)");
  sw->add_option("--plot", plot_path, "Line plot PNG");

  // index / predict
  auto* idx = app.add_subcommand("index", "Build a nearest-neighbour index over a dataset");
  std::string dataset_dir, split_arg = "train";
  int side = ts::kFeatureSide;
  idx->add_option("--dataset", dataset_dir, "Dataset root (holding manifest.json)")->required();
  idx->add_option("--split", split_arg, "train, val or all");
  idx->add_option("--side", side, "Feature side in pixels");
  idx->add_option("--out", out, "Index file")->required();
  auto* pr = app.add_subcommand("predict", "Nearest-neighbour parameters for a sketch");
  std::string sketch_path;
  pr->add_option("--index", index_path, "Index file")->required();
  pr->add_option("--sketch", sketch_path, "Sketch PNG")->required();
  pr->add_option("--out", out, "Parameter output (stdout if omitted)");

  // randomize
  auto* rnd = app.add_subcommand("randomize", "Draw a parameter dictionary from a species profile");
  std::string one_species;
  rnd->add_option("--species", one_species, "Species")->required();
  rnd->add_option("--seed", seed, "Seed");
  rnd->add_option("--out", out, "Parameter output (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (gen->parsed()) {
      ts::GenerateOptions o;
      if (!species_arg.empty()) {
        o.species.clear();
        for (const auto& s : split_list(species_arg)) o.species.push_back(ts::parse_species(s));
      }
      if (!views_arg.empty()) {
        o.views.clear();
        for (const auto& v : split_list(views_arg)) o.views.push_back(ts::parse_view(v));
      }
      o.trees_per_species = paper_scale ? ts::kPaperTreesPerSpecies : count;
      o.resolution = resolution;
      o.seed = seed;
      o.out = out;
      o.fail_fast = fail_fast;
      o.write_meshes = !no_meshes;
      o.normalize_nonnegative = norm_nonneg;
      o.workers = workers;
      const auto m = ts::generate_dataset(o);
      std::size_t failed = 0;
      for (const auto& t : m.trees)
        if (t.error) {
          ++failed;
          std::cerr << "failed " << t.dir << " (seed " << t.seed << "): " << *t.error << "\n";
        }
      std::cout << m.samples.size() << " samples (" << m.count(ts::Split::Train) << " train, "
                << m.count(ts::Split::Validation) << " val), " << failed << " failed trees\n";
      return failed ? kValidation : kOk;
    }

    if (rec->parsed()) {
      load_valid_params(params_in);
      const auto r = ts::reconstruct(params_in, skeleton_path, foliage_path);
      if (r.species)
        std::cout << ts::species_name(r.species->species) << " " << *r.texture << "\n";
      else
        std::cout << "unidentified: " << r.note << "\n";
      return kOk;
    }

    if (sk->parsed()) {
      ts::TreeMeshes meshes;
      if (!params_in.empty()) {
        if (!skeleton_path.empty() || !foliage_path.empty())
          throw UsageError("use either --params or --skeleton/--foliage");
        meshes = ts::grow_tree(load_valid_params(params_in));
      } else {
        if (skeleton_path.empty()) throw UsageError("--skeleton or --params required");
        meshes.skeleton = ts::load_obj(skeleton_path);
        meshes.skeleton.part = ts::MeshPart::Skeleton;
        if (!foliage_path.empty()) {
          meshes.foliage = ts::load_obj(foliage_path);
          meshes.foliage.part = ts::MeshPart::Foliage;
        }
      }
      ts::Box3 box = meshes.skeleton.bounds();
      box.extend(meshes.foliage.bounds());
      const auto cam = ts::canonical_camera(ts::parse_view(view_arg), box);
      ts::write_png(ts::sketch_tree(meshes.skeleton, meshes.foliage, cam, resolution), out);
      if (!gt_out.empty()) ts::write_png(ts::render_gt(meshes.skeleton, meshes.foliage, cam, resolution), gt_out);
      return kOk;
    }

    if (enc->parsed()) {
      auto bundle = ts::split_groups(ts::encode(load_valid_params(params_in)));
      if (!norm_path.empty()) bundle = ts::normalize(bundle, ts::load_record(norm_path));
      emit(ts::bundle_to_json(bundle), out);
      return kOk;
    }

    if (dec->parsed()) {
      auto bundle = ts::load_bundle(bundle_path);
      if (!norm_path.empty()) bundle = ts::denormalize(bundle, ts::load_record(norm_path));
      emit(ts::params_to_json(ts::decode(bundle)), out);
      return kOk;
    }

    if (ident->parsed()) {
      const auto id = ts::identify(load_valid_params(params_in));
      nlohmann::json j = {{"species", ts::species_name(id.species)},
                          {"eligibility", id.percentage},
                          {"texture", ts::texture_for(id.species).id()}};
      if (id.tied.size() > 1) {
        nlohmann::json tied = nlohmann::json::array();
        for (auto s : id.tied) tied.push_back(ts::species_name(s));
        j["tied"] = tied;
      }
      emit(j, "");
      return kOk;
    }

    if (ev->parsed()) {
      const bool param_mode = !pred.empty() || !gt.empty();
      const bool bundle_mode = !pred_bundle.empty() || !gt_bundle.empty();
      const bool mesh_mode = !pred_mesh.empty() || !gt_mesh.empty();
      if (int(param_mode) + int(bundle_mode) + int(mesh_mode) != 1)
        throw UsageError("choose exactly one of --pred/--gt, --pred-bundle/--gt-bundle, --pred-mesh/--gt-mesh");
      if (mesh_mode) {
        if (pred_mesh.empty() || gt_mesh.empty()) throw UsageError("both --pred-mesh and --gt-mesh required");
        ts::HausdorffOptions h;
        h.sampling = vertices_only ? ts::Sampling::Vertices : ts::Sampling::Surface;
        h.surface_samples = samples;
        h.seed = seed;
        h.symmetric = !one_sided;
        h.normalize = !raw_scale;
        const double d = ts::hausdorff(ts::load_obj(pred_mesh), ts::load_obj(gt_mesh), h);
        emit({{"metric", "hausdorff"}, {"hdd", d}, {"symmetric", h.symmetric}, {"normalized", h.normalize}}, out);
        return kOk;
      }
      ts::TargetBundle p, g;
      if (bundle_mode) {
        if (pred_bundle.empty() || gt_bundle.empty()) throw UsageError("both --pred-bundle and --gt-bundle required");
        p = ts::load_bundle(pred_bundle);
        g = ts::load_bundle(gt_bundle);
      } else {
        if (pred.empty() || gt.empty()) throw UsageError("both --pred and --gt required");
        p = ts::split_groups(ts::encode(load_valid_params(pred)));
        g = ts::split_groups(ts::encode(load_valid_params(gt)));
        const auto record = norm_path.empty() ? ts::build_record(std::vector<ts::TargetBundle>{g})
                                              : ts::load_record(norm_path);
        p = ts::normalize(p, record);
        g = ts::normalize(g, record);
      }
      emit(ts::report_to_json(ts::one_minus_rmse(p, g)), out);
      return kOk;
    }

    if (sw->parsed()) {
      if (oracle == !index_path.empty()) throw UsageError("choose exactly one of --oracle or --index");
      const ts::TreeParams truth = load_valid_params(params_in);
      std::optional<ts::SketchIndex> index;
      if (!index_path.empty()) index = ts::SketchIndex::load(index_path);
      ts::Predictor predictor = [&](const ts::RasterImage& s) -> ts::TreeParams {
        return index ? index->predict(s) : truth;
      };
      ts::SweepOptions o;
      o.step_deg = step;
      o.resolution = resolution;
      o.hausdorff.surface_samples = samples;
      const auto entries = ts::rotation_sweep(truth, predictor, o);
      emit(ts::sweep_to_json(entries), out);
      if (!plot_path.empty()) ts::write_png(ts::plot_sweep(entries), plot_path);
      return kOk;
    }

    if (idx->parsed()) {
      const fs::path root = dataset_dir;
      const auto m = ts::load_manifest(root / "manifest.json");
      if (split_arg != "train" && split_arg != "val" && split_arg != "all")
        throw UsageError("--split must be train, val or all");
      ts::SketchIndex index(side);
      for (const auto& s : m.samples) {
        if (split_arg != "all" && ts::split_name(s.split) != split_arg) continue;
        index.add(ts::read_png(root / s.sketch), ts::load_params(root / s.params), s.sketch);
      }
      index.save(out);
      std::cout << index.entries().size() << " entries\n";
      return kOk;
    }

    if (pr->parsed()) {
      const auto index = ts::SketchIndex::load(index_path);
      emit(ts::params_to_json(index.predict(ts::read_png(sketch_path))), out);
      return kOk;
    }

    if (rnd->parsed()) {
      const auto& profile = ts::standard_profile(ts::parse_species(one_species));
      emit(ts::params_to_json(ts::randomize(profile, seed)), out);
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const ts::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const ts::ValidationError& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kUsage;
}
