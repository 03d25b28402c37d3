#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include <json.hpp>

#include "treesketch/codec.hpp"
#include "treesketch/geometry.hpp"
#include "treesketch/image.hpp"
#include "treesketch/mesh.hpp"
#include "treesketch/raster.hpp"
#include "treesketch/sketch.hpp"

namespace treesketch {

struct AccuracyReport {
  std::array<double, kAllGroups.size()> group{};
  double overall = 0.0;
};

// Per group 1 - sqrt(mean squared error) over all 4 x n entries; overall is
// the mean of the six group scores.
AccuracyReport one_minus_rmse(const TargetBundle& pred, const TargetBundle& gt);
nlohmann::json report_to_json(const AccuracyReport& r);

enum class Sampling { Vertices, Surface };

struct HausdorffOptions {
  Sampling sampling = Sampling::Surface;
  std::size_t surface_samples = 10000;  // on top of the vertices
  std::uint64_t seed = 0;
  bool normalize = true;   // scale both sets by 1 / max extent of their joint bounds
  bool symmetric = true;   // false: only a -> b
};

// Vertices followed by `count` area-weighted stratified samples.
std::vector<Vec3> sample_surface(const Mesh& mesh, std::size_t count, std::uint64_t seed);

// max over p in `from` of the distance to the nearest point of `to`.
double directed_hausdorff(std::span<const Vec3> from, std::span<const Vec3> to);
// Point-set Hausdorff without rescaling.
double hausdorff_points(std::span<const Vec3> a, std::span<const Vec3> b, bool symmetric = true);

// Throws ValidationError on an empty mesh.
double hausdorff(const Mesh& a, const Mesh& b, const HausdorffOptions& options = {});

// Skeleton and foliage as one mesh.
Mesh combined(const Mesh& skeleton, const Mesh& foliage);

using Predictor = std::function<TreeParams(const RasterImage& sketch)>;

struct SweepEntry {
  int angle_deg = 0;
  double hdd = 0.0;
};

struct SweepOptions {
  int step_deg = 5;
  int resolution = 608;
  View view = View::Front;
  HausdorffOptions hausdorff;
  SketchConfig sketch;
};

// Rotates the ground-truth tree about Z in `step_deg` increments, sketches it,
// asks the predictor for parameters, grows them, rotates the result by the same
// angle and measures the Hausdorff distance to the rotated ground truth.
std::vector<SweepEntry> rotation_sweep(const TreeParams& gt, const Predictor& predictor,
                                       const SweepOptions& options = {});

nlohmann::json sweep_to_json(std::span<const SweepEntry> entries);
// Line plot of HDD against angle.
RasterImage plot_sweep(std::span<const SweepEntry> entries, int width = 640, int height = 320);

}  // namespace treesketch
