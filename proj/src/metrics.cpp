#include "treesketch/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "treesketch/errors.hpp"
#include "treesketch/rng.hpp"
#include "treesketch/simd/kernels.hpp"
#include "treesketch/synthesis.hpp"

namespace treesketch {

AccuracyReport one_minus_rmse(const TargetBundle& pred, const TargetBundle& gt) {
  AccuracyReport r;
  double sum = 0.0;
  for (std::size_t g = 0; g < kAllGroups.size(); ++g) {
    const KeyedMatrix& p = pred.groups[g];
    const KeyedMatrix& t = gt.groups[g];
    if (p.keys != t.keys || p.data.size() != t.data.size())
      throw ValidationError("bundle shape mismatch in group " + std::string(group_name(kAllGroups[g])));
    double sq = 0.0;
    for (std::size_t i = 0; i < p.data.size(); ++i) {
      const double d = p.data[i] - t.data[i];
      sq += d * d;
    }
    r.group[g] = p.data.empty() ? 1.0 : 1.0 - std::sqrt(sq / double(p.data.size()));
    sum += r.group[g];
  }
  r.overall = sum / double(kAllGroups.size());
  return r;
}

nlohmann::json report_to_json(const AccuracyReport& r) {
  nlohmann::json groups = nlohmann::json::object();
  for (std::size_t g = 0; g < kAllGroups.size(); ++g) groups[std::string(group_name(kAllGroups[g]))] = r.group[g];
  return {{"metric", "1-rmse"}, {"groups", groups}, {"overall", r.overall}};
}

std::vector<Vec3> sample_surface(const Mesh& mesh, std::size_t count, std::uint64_t seed) {
  std::vector<Vec3> out = mesh.vertices;
  if (mesh.triangles.empty() || count == 0) return out;
  std::vector<double> cdf(mesh.triangles.size());
  double total = 0.0;
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    const auto& t = mesh.triangles[i];
    total += triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
    cdf[i] = total;
  }
  if (!(total > 0.0)) return out;
  Rng rng(seed);
  out.reserve(out.size() + count);
  for (std::size_t k = 0; k < count; ++k) {
    const double target = (double(k) + rng.uniform()) / double(count) * total;
    const std::size_t i = std::min<std::size_t>(
        static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), target) - cdf.begin()),
        cdf.size() - 1);
    const auto& t = mesh.triangles[i];
    const double r1 = std::sqrt(rng.uniform()), r2 = rng.uniform();
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    out.push_back(a * (1.0 - r1) + b * (r1 * (1.0 - r2)) + c * (r1 * r2));
  }
  return out;
}

namespace {

// Uniform grid over a point set; cells are stored contiguously as SoA.
class PointGrid {
 public:
  explicit PointGrid(std::span<const Vec3> pts) {
    for (const Vec3& p : pts) box_.extend(p);
    const Vec3 e = box_.extent();
    const double volume_edge = std::max({e.x, e.y, e.z, 1e-12});
    // about two points per cell along the populated dimensions
    const double target_cells = std::max(1.0, double(pts.size()) / 2.0);
    double dims = 0.0, prod = 1.0;
    for (double v : {e.x, e.y, e.z})
      if (v > 1e-9 * volume_edge) {
        dims += 1.0;
        prod *= v;
      }
    cell_ = dims > 0 ? std::pow(prod / target_cells, 1.0 / dims) : 1.0;
    cell_ = std::max(cell_, 1e-9 * volume_edge);
    n_[0] = count_along(e.x);
    n_[1] = count_along(e.y);
    n_[2] = count_along(e.z);

    const std::size_t cells = std::size_t(n_[0]) * n_[1] * n_[2];
    start_.assign(cells + 1, 0);
    std::vector<std::size_t> owner(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto c = cell_of(pts[i]);
      owner[i] = flat(c[0], c[1], c[2]);
      ++start_[owner[i] + 1];
    }
    for (std::size_t c = 0; c < cells; ++c) start_[c + 1] += start_[c];
    xs_.resize(pts.size());
    ys_.resize(pts.size());
    zs_.resize(pts.size());
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::size_t slot = fill[owner[i]]++;
      xs_[slot] = pts[i].x;
      ys_[slot] = pts[i].y;
      zs_[slot] = pts[i].z;
    }
  }

  // Squared distance to the nearest point, or any value <= cutoff_sq once one
  // is known to exist below it.
  double nearest_sq(const Vec3& p, double cutoff_sq) const {
    const auto& k = simd::active();
    const auto home = cell_of(p);
    const int max_shell = std::max({n_[0], n_[1], n_[2]});
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s <= max_shell; ++s) {
      for (int dz = -s; dz <= s; ++dz) {
        const int z = home[2] + dz;
        if (z < 0 || z >= n_[2]) continue;
        for (int dy = -s; dy <= s; ++dy) {
          const int y = home[1] + dy;
          if (y < 0 || y >= n_[1]) continue;
          const bool face = std::abs(dz) == s || std::abs(dy) == s;
          for (int dx = -s; dx <= s; dx += (face || s == 0) ? 1 : 2 * s) {
            const int x = home[0] + dx;
            if (x < 0 || x >= n_[0]) continue;
            const std::size_t c = flat(x, y, z);
            const std::size_t b = start_[c], e = start_[c + 1];
            if (b == e) continue;
            best = std::min(best, k.min_sq_distance(p.x, p.y, p.z, xs_.data() + b, ys_.data() + b,
                                                    zs_.data() + b, e - b));
          }
        }
      }
      // Unvisited points sit at least s cells away from the box projection of p,
      // and projecting onto the box never increases distances.
      const double reach = double(s) * cell_;
      if (best <= reach * reach || best <= cutoff_sq) break;
    }
    return best;
  }

 private:
  int count_along(double extent) const {
    return std::clamp(static_cast<int>(std::floor(extent / cell_)) + 1, 1, 1 << 10);
  }
  std::array<int, 3> cell_of(const Vec3& p) const {
    auto idx = [&](double v, double lo, int n) {
      return std::clamp(static_cast<int>(std::floor((v - lo) / cell_)), 0, n - 1);
    };
    return {idx(p.x, box_.lo.x, n_[0]), idx(p.y, box_.lo.y, n_[1]), idx(p.z, box_.lo.z, n_[2])};
  }
  std::size_t flat(int x, int y, int z) const {
    return (std::size_t(z) * n_[1] + std::size_t(y)) * n_[0] + std::size_t(x);
  }

  Box3 box_;
  double cell_ = 1.0;
  std::array<int, 3> n_{1, 1, 1};
  std::vector<std::size_t> start_;
  std::vector<double> xs_, ys_, zs_;
};

}  // namespace

double directed_hausdorff(std::span<const Vec3> from, std::span<const Vec3> to) {
  if (from.empty() || to.empty()) throw ValidationError("hausdorff of an empty point set");
  const PointGrid grid(to);
  double worst = 0.0;
  for (const Vec3& p : from) worst = std::max(worst, grid.nearest_sq(p, worst));
  return std::sqrt(worst);
}

double hausdorff_points(std::span<const Vec3> a, std::span<const Vec3> b, bool symmetric) {
  const double ab = directed_hausdorff(a, b);
  return symmetric ? std::max(ab, directed_hausdorff(b, a)) : ab;
}

double hausdorff(const Mesh& a, const Mesh& b, const HausdorffOptions& options) {
  if (a.vertices.empty() || b.vertices.empty()) throw ValidationError("hausdorff of an empty mesh");
  std::vector<Vec3> pa, pb;
  if (options.sampling == Sampling::Vertices) {
    pa = a.vertices;
    pb = b.vertices;
  } else {
    pa = sample_surface(a, options.surface_samples, options.seed);
    pb = sample_surface(b, options.surface_samples, options.seed);
  }
  if (options.normalize) {
    Box3 box;
    for (const Vec3& p : pa) box.extend(p);
    for (const Vec3& p : pb) box.extend(p);
    const double ext = box.max_extent();
    if (ext > 0.0) {
      for (Vec3& p : pa) p = (p - box.lo) / ext;
      for (Vec3& p : pb) p = (p - box.lo) / ext;
    }
  }
  return hausdorff_points(pa, pb, options.symmetric);
}

Mesh combined(const Mesh& skeleton, const Mesh& foliage) {
  Mesh m = skeleton;
  m.axis_points.clear();
  Mesh f = foliage;
  f.axis_points.clear();
  m.append(f);
  return m;
}

std::vector<SweepEntry> rotation_sweep(const TreeParams& gt, const Predictor& predictor,
                                       const SweepOptions& options) {
  if (options.step_deg <= 0 || 360 % options.step_deg != 0)
    throw ValidationError("rotation step must divide 360");
  const TreeMeshes truth = grow_tree(gt);
  std::vector<SweepEntry> out;
  for (int angle = 0; angle < 360; angle += options.step_deg) {
    const double rad = radians(angle);
    const Mesh sk = rotated_about_z(truth.skeleton, rad);
    const Mesh fo = rotated_about_z(truth.foliage, rad);
    Box3 box = sk.bounds();
    box.extend(fo.bounds());
    const RasterImage sketch =
        sketch_tree(sk, fo, canonical_camera(options.view, box), options.resolution, options.sketch);
    TreeMeshes rebuilt;
    try {
      rebuilt = grow_tree(predictor(sketch));
    } catch (const std::exception& e) {
      throw Error("prediction failed at angle " + std::to_string(angle) + ": " + e.what());
    }
    const Mesh pred = combined(rotated_about_z(rebuilt.skeleton, rad), rotated_about_z(rebuilt.foliage, rad));
    out.push_back({angle, hausdorff(pred, combined(sk, fo), options.hausdorff)});
  }
  return out;
}

nlohmann::json sweep_to_json(std::span<const SweepEntry> entries) {
  nlohmann::json rows = nlohmann::json::array();
  double sum = 0.0, worst = 0.0;
  for (const auto& e : entries) {
    rows.push_back({{"angle", e.angle_deg}, {"hdd", e.hdd}});
    sum += e.hdd;
    worst = std::max(worst, e.hdd);
  }
  return {{"metric", "hausdorff"},
          {"entries", rows},
          {"mean", entries.empty() ? 0.0 : sum / double(entries.size())},
          {"max", worst}};
}

RasterImage plot_sweep(std::span<const SweepEntry> entries, int width, int height) {
  RasterImage img(width, height, 1.0f);
  const int margin = 20;
  const int x0 = margin, x1 = width - margin, y0 = height - margin, y1 = margin;
  for (int x = x0; x <= x1; ++x) img.at(x, y0) = 0.0f;
  for (int y = y1; y <= y0; ++y) img.at(x0, y) = 0.0f;
  if (entries.empty()) return img;
  double top = 0.0;
  for (const auto& e : entries) top = std::max(top, e.hdd);
  if (top <= 0.0) top = 1.0;
  auto px = [&](const SweepEntry& e) {
    return std::pair<double, double>{x0 + (x1 - x0) * e.angle_deg / 360.0, y0 - (y0 - y1) * e.hdd / top};
  };
  for (std::size_t i = 0; i + 1 < entries.size(); ++i) {
    const auto [ax, ay] = px(entries[i]);
    const auto [bx, by] = px(entries[i + 1]);
    const int steps = static_cast<int>(std::ceil(std::max(std::abs(bx - ax), std::abs(by - ay)))) + 1;
    for (int s = 0; s <= steps; ++s) {
      const double t = double(s) / steps;
      const int x = static_cast<int>(std::lround(ax + (bx - ax) * t));
      const int y = static_cast<int>(std::lround(ay + (by - ay) * t));
      if (x >= 0 && x < width && y >= 0 && y < height) img.at(x, y) = 0.0f;
    }
  }
  return img;
}

}  // namespace treesketch
