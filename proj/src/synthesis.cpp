#include "treesketch/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "treesketch/errors.hpp"
#include "treesketch/rng.hpp"

namespace treesketch {

double trunk_radius(double trunk_length, double ratio, double scale0, double scale_v0,
                    double variation_draw) {
  const double r = trunk_length * ratio * (scale0 + variation_draw * scale_v0);
  if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("degenerate trunk radius");
  return r;
}

double child_radius(double parent_radius, double child_len, double parent_len, double ratio_power,
                    double tweak, double min_radius) {
  double r = parent_radius * tweak;
  if (parent_len > 0.0) r *= std::pow(child_len / parent_len, ratio_power);
  return std::max(min_radius, r);
}

SplitDecision split_count(double seg_splits, double error_acc) {
  const double wanted = seg_splits + error_acc;
  const int n = static_cast<int>(std::clamp(std::round(wanted), 0.0, 3.0));
  return {n, wanted - n};
}

TreeShape parse_shape(std::string_view label) {
  static constexpr std::pair<std::string_view, TreeShape> table[] = {
      {"conical", TreeShape::Conical},
      {"spherical", TreeShape::Spherical},
      {"hemispherical", TreeShape::Hemispherical},
      {"cylindrical", TreeShape::Cylindrical},
      {"tapered_cylindrical", TreeShape::TaperedCylindrical},
      {"flame", TreeShape::Flame},
      {"inverse_conical", TreeShape::InverseConical},
      {"tend_flame", TreeShape::TendFlame},
      {"envelope", TreeShape::Envelope},
      {"custom", TreeShape::Custom},
  };
  for (const auto& [name, shape] : table)
    if (name == label) return shape;
  throw ValidationError("unknown shape: " + std::string(label));
}

double shape_ratio(TreeShape shape, int level, double position, std::span<const double> custom) {
  constexpr double kFloor = 1e-3;
  // r = 1 at the parent base, 0 at its tip
  const double r = 1.0 - std::clamp(position, 0.0, 1.0);
  double v = 1.0;
  switch (shape) {
    case TreeShape::Conical: v = 0.2 + 0.8 * r; break;
    case TreeShape::Spherical: v = 0.2 + 0.8 * std::sin(kPi * r); break;
    case TreeShape::Hemispherical: v = 0.2 + 0.8 * std::sin(0.5 * kPi * r); break;
    case TreeShape::Cylindrical: v = 1.0; break;
    case TreeShape::TaperedCylindrical: v = 0.5 + 0.5 * r; break;
    case TreeShape::Flame: v = r <= 0.7 ? r / 0.7 : (1.0 - r) / 0.3; break;
    case TreeShape::InverseConical: v = 1.0 - 0.8 * r; break;
    case TreeShape::TendFlame: v = r <= 0.7 ? 0.5 + 0.5 * r / 0.7 : 0.5 + 0.5 * (1.0 - r) / 0.3; break;
    case TreeShape::Envelope: {
      constexpr double width = 0.5, peak = 0.6, power_high = 0.5, power_low = 0.001;
      v = r < 1.0 - peak ? std::pow(r / (1.0 - peak), power_high)
                         : std::pow((1.0 - r) / peak, power_low);
      v *= width;
      break;
    }
    case TreeShape::Custom: {
      if (level < 0 || static_cast<std::size_t>(level) >= custom.size())
        throw ValidationError("custom shape needs a value per level");
      v = custom[static_cast<std::size_t>(level)];
      break;
    }
  }
  return std::max(kFloor, v);
}

double Stem::radius_at(double z) const {
  z = std::clamp(z, 0.0, 1.0);
  double r = std::max(min_radius, base_radius * (1.0 - taper * z) * radius_factor);
  if (level == 0 && flare > 0.0) {
    const double y = std::max(0.0, 1.0 - 8.0 * z);
    r *= 1.0 + flare * (std::pow(100.0, y) - 1.0) / 100.0;
  }
  return r;
}

namespace {

constexpr double kMinRadiusFloor = 1e-5;

struct Pending {
  int level = 0;
  std::optional<std::size_t> parent;
  double attach = 0.0;
  Vec3 origin;
  Vec3 direction;
  Vec3 normal;  // perpendicular to direction; curvature bends about it
  double length = 0.0;
  double base_radius = 0.0;
  double radius_factor = 1.0;
  int start_segment = 0;
  bool clone = false;
  double clone_prob = 1.0;
};

using Levels = std::array<double, kLevelCount>;

struct Settings {
  int levels = 1;
  double sign = 1.0;
  Levels curve_res{}, curve{}, curve_back{}, curve_v{};
  Levels seg_splits{}, split_angle{}, split_angle_v{};
  Levels rotate{}, rotate_v{}, down{}, down_v{}, length{}, length_v{};
  Levels taper{}, tweak{}, branches{}, attract_up{}, attract_out{}, custom{};
  double scale = 1, scale_v = 0, ratio = 0, radius_scale = 1, radius_scale_v = 0;
  double ratio_power = 1, min_radius = 0, flare = 0, taper_crown = 0;
  double trunk_height = 0, secondary_base = 0, split_height = 0, split_bias = 0;
  double parent_roll = 0, branch_rotate = 0, branch_dist = 1;
  int forks = 0, whorls = 0;
  TreeShape shape{}, secondary{}, leaf_dist{};
  std::string mode;
  bool use_parent_angle = true, old_down_var = false;
  bool show_leaves = false, horizontal_leaves = false;
  int leaves = 0;
  double leaf_down = 0, leaf_down_v = 0, leaf_roll = 0, leaf_roll_v = 0;
  double leaf_scale = 0, leaf_scale_v = 0, leaf_scale_x = 1, leaf_taper = 0, leaf_angle = 0;

  explicit Settings(const TreeParams& p) {
    levels = p.integer(pn::kLevels);
    sign = p.scalar(pn::kSign);
    curve_res = p.levels(pn::kCurveResolution);
    curve = p.levels(pn::kCurvature);
    curve_back = p.levels(pn::kBackCurvature);
    curve_v = p.levels(pn::kCurvatureVariance);
    seg_splits = p.levels(pn::kSegmentSplits);
    split_angle = p.levels(pn::kSiblingAngle);
    split_angle_v = p.levels(pn::kSiblingAngleVariance);
    rotate = p.levels(pn::kBranchRollAngle);
    rotate_v = p.levels(pn::kBranchRollAngleVariance);
    down = p.levels(pn::kParentBranchAngle);
    down_v = p.levels(pn::kParentBranchAngleVariance);
    length = p.levels(pn::kLength);
    length_v = p.levels(pn::kLengthVariation);
    taper = p.levels(pn::kTaper);
    tweak = p.levels(pn::kTweakRadius);
    branches = p.levels(pn::kBranches);
    attract_up = p.levels(pn::kVerticalAttraction);
    attract_out = p.levels(pn::kOutwardAttraction);
    custom = p.levels(pn::kCustomShape);
    scale = p.scalar(pn::kScale);
    scale_v = p.scalar(pn::kScaleVariation);
    ratio = p.scalar(pn::kRatio);
    radius_scale = p.scalar(pn::kRadiusScale);
    radius_scale_v = p.scalar(pn::kRadiusScaleVariation);
    ratio_power = p.scalar(pn::kBranchRadiusRatio);
    min_radius = std::max(kMinRadiusFloor, p.scalar(pn::kMinimumRadius));
    flare = p.scalar(pn::kRootFlare);
    taper_crown = p.scalar(pn::kTaperCrown);
    trunk_height = p.scalar(pn::kTrunkHeight);
    secondary_base = p.scalar(pn::kSecondaryBaseSize);
    split_height = p.scalar(pn::kSplitHeight);
    split_bias = p.scalar(pn::kSplitBias);
    parent_roll = p.scalar(pn::kParentBranchRollAngle);
    branch_rotate = p.scalar(pn::kBranchRotate);
    branch_dist = p.scalar(pn::kBranchDistribution);
    forks = p.integer(pn::kTreeForks);
    whorls = p.integer(pn::kBranchWhorls);
    shape = parse_shape(p.label(pn::kShape));
    secondary = parse_shape(p.label(pn::kSecondarySplits));
    leaf_dist = parse_shape(p.label(pn::kLeafDistribution));
    mode = p.label(pn::kBranchingMode);
    use_parent_angle = p.flag(pn::kUseParentAngle);
    old_down_var = p.flag(pn::kUseOldDownAngleVariation);
    show_leaves = p.flag(pn::kShowLeaves);
    horizontal_leaves = p.flag(pn::kHorizontalLeaves);
    leaves = p.integer(pn::kLeaves);
    leaf_down = p.scalar(pn::kLeafDownAngle);
    leaf_down_v = p.scalar(pn::kLeafDownAngleVariation);
    leaf_roll = p.scalar(pn::kLeafRollAngle);
    leaf_roll_v = p.scalar(pn::kLeafAngleVariance);
    leaf_scale = p.scalar(pn::kLeafScale);
    leaf_scale_v = p.scalar(pn::kLeafScaleVariance);
    leaf_scale_x = p.scalar(pn::kLeafScaleX);
    leaf_taper = p.scalar(pn::kLeafScaleTaper);
    leaf_angle = p.scalar(pn::kLeafAngle);
  }

  double child_shape(int child_level, double position) const {
    if (shape == TreeShape::Custom || child_level == 1)
      return shape_ratio(shape, child_level, position, custom);
    return shape_ratio(secondary, child_level, position, custom);
  }
};

Vec3 orthogonalize(const Vec3& v, const Vec3& dir) {
  const Vec3 w = v - dir * dot(v, dir);
  const double n = norm(w);
  return n > 1e-12 ? w / n : any_perpendicular(dir);
}

struct StemPoint {
  Vec3 pos, tangent, normal;
};

// Point, tangent and frame normal at fraction z of a stem's nominal length.
StemPoint sample_stem(const Stem& s, double z) {
  const int pts = static_cast<int>(s.control_points.size());
  const double f = std::clamp(z * s.segments - s.start_segment, 0.0, double(pts - 1));
  const int i = std::min(static_cast<int>(f), pts - 2);
  const double u = f - i;
  const Vec3& a = s.control_points[i];
  const Vec3& b = s.control_points[i + 1];
  const Vec3 t = normalized(b - a);
  return {a + (b - a) * u, t, orthogonalize(s.frame_normals[i], t)};
}

int share(int total, int start_segment, int segments) {
  if (start_segment == 0) return total;
  return static_cast<int>(std::round(double(total) * (segments - start_segment) / segments));
}

class Grower {
 public:
  Grower(const TreeParams& params, std::uint64_t seed) : s_(params), rng_(seed) {}

  TreeStructure run() {
    plant_trunk();
    while (!queue_.empty()) {
      Pending p = std::move(queue_.front());
      queue_.pop_front();
      grow(p);
    }
    return std::move(out_);
  }

 private:
  void plant_trunk() {
    const double scale = s_.scale + rng_.signed_unit() * s_.scale_v;
    double len = scale * (s_.length[0] + rng_.signed_unit() * s_.length_v[0]);
    if (s_.shape == TreeShape::Custom) len *= s_.custom[0];
    if (!(len > 0.0) || !std::isfinite(len)) throw ValidationError("degenerate tree");
    out_.trunk_length = len;

    Pending t;
    t.level = 0;
    t.origin = {0, 0, 0};
    t.direction = kUp;
    t.normal = rotate_z({1, 0, 0}, radians(rng_.uniform(0.0, 360.0)));
    t.length = len;
    t.base_radius = trunk_radius(len, s_.ratio, s_.radius_scale, s_.radius_scale_v, rng_.signed_unit());
    queue_.push_back(t);
  }

  void grow(const Pending& p);
  void add_children(const Pending& p, std::size_t id);
  void add_leaves(const Pending& p, std::size_t id);
  int split_at(const Pending& p, int point, int segments, double clone_prob);

  Settings s_;
  Rng rng_;
  std::deque<Pending> queue_;
  Levels split_error_{};
  TreeStructure out_;
};

int Grower::split_at(const Pending& p, int point, int segments, double clone_prob) {
  const int L = p.level;
  const double z = double(point) / segments;
  if (L == 0 && !p.clone && s_.forks > 0) {
    const int base = std::clamp(static_cast<int>(std::ceil(s_.trunk_height * segments)), 1,
                                std::max(1, segments - 1));
    if (point == base) return s_.forks;
  }
  double wanted = s_.seg_splits[L];
  if (wanted <= 0.0) return 0;
  if (L == 0) {
    if (z < s_.split_height) return 0;
    wanted = std::clamp(wanted * std::exp(s_.split_bias * (z - 0.5)), 0.0, 3.0);
  }
  if (rng_.uniform() >= clone_prob) return 0;
  const auto d = split_count(wanted, split_error_[L]);
  split_error_[L] = d.error;
  return d.splits;
}

void Grower::grow(const Pending& p) {
  const int L = p.level;
  const int segs = std::max(1, static_cast<int>(s_.curve_res[L]));
  const std::size_t id = out_.stems.size();

  Stem stem;
  stem.level = L;
  stem.parent = p.parent;
  stem.attach = p.attach;
  stem.clone = p.clone;
  stem.start_segment = p.start_segment;
  stem.segments = segs;
  stem.length = p.length;
  stem.base_radius = p.base_radius;
  stem.radius_factor = p.radius_factor;
  stem.taper = s_.taper[L];
  stem.min_radius = s_.min_radius;
  stem.flare = L == 0 ? s_.flare : 0.0;

  const double seg_len = p.length / segs;
  Vec3 pos = p.origin;
  Vec3 dir = normalized(p.direction);
  Vec3 nrm = orthogonalize(p.normal, dir);
  double clone_prob = p.clone_prob;
  stem.control_points.push_back(pos);
  stem.frame_normals.push_back(nrm);

  for (int i = p.start_segment + 1; i <= segs; ++i) {
    const int seg = i - 1;
    double bend = (2 * seg < segs ? s_.curve[L] : s_.curve_back[L]) / segs;
    bend += rng_.signed_unit() * s_.curve_v[L] / segs;
    dir = rotate(dir, nrm, radians(bend));

    if (L > 0 && s_.attract_up[L] != 0.0) {
      const Vec3 axis = cross(dir, kUp);
      if (norm(axis) > 1e-9) {
        const double decl = angle_between(dir, kUp);
        const double turn = std::clamp(s_.attract_up[L] * decl / segs, -(kPi - decl), decl);
        const Vec3 k = normalized(axis);
        dir = rotate(dir, k, turn);
        nrm = rotate(nrm, k, turn);
      }
    }
    if (L > 0 && s_.attract_out[L] != 0.0) {
      const Vec3 radial{pos.x, pos.y, 0.0};
      if (norm(radial) > 1e-9) {
        const Vec3 bent = dir + normalized(radial) * (s_.attract_out[L] / segs);
        if (norm(bent) > 1e-9) dir = normalized(bent);
      }
    }
    nrm = orthogonalize(nrm, dir);
    pos += dir * seg_len;
    stem.control_points.push_back(pos);
    stem.frame_normals.push_back(nrm);

    if (i == segs) break;
    const int n = split_at(p, i, segs, clone_prob);
    if (n <= 0) continue;
    if (out_.stems.size() + queue_.size() + n > kMaxStems)
      throw ValidationError("tree too complex: stem limit exceeded");

    const double alpha = s_.sign * (s_.split_angle[L] + rng_.signed_unit() * s_.split_angle_v[L]);
    const double roll0 = rng_.uniform(0.0, 360.0);
    clone_prob /= (n + 1);
    SplitEvent ev{id, L, i, {}};
    Vec3 next_dir = dir, next_nrm = nrm;
    for (int j = 0; j <= n; ++j) {
      const Vec3 axis = rotate(nrm, dir, radians(roll0 + j * 360.0 / (n + 1)));
      const Vec3 d = rotate(dir, axis, radians(alpha));
      ev.directions.push_back(d);
      if (j == 0) {
        next_dir = d;
        next_nrm = axis;
        continue;
      }
      Pending c;
      c.level = L;
      c.parent = p.parent;
      c.attach = p.attach;
      c.origin = pos;
      c.direction = d;
      c.normal = axis;
      c.length = p.length;
      c.base_radius = p.base_radius;
      c.radius_factor = p.radius_factor * (1.0 - s_.taper_crown);
      c.start_segment = i;
      c.clone = true;
      c.clone_prob = clone_prob;
      queue_.push_back(c);
    }
    out_.splits.push_back(std::move(ev));
    dir = next_dir;
    nrm = next_nrm;
  }

  stem.radii.reserve(stem.control_points.size());
  for (std::size_t k = 0; k < stem.control_points.size(); ++k)
    stem.radii.push_back(stem.radius_at(double(p.start_segment + int(k)) / segs));
  out_.stems.push_back(std::move(stem));

  if (L + 1 < s_.levels) add_children(p, id);
  if (L == s_.levels - 1) add_leaves(p, id);
}

void Grower::add_children(const Pending& p, std::size_t id) {
  const int L = p.level;
  const int C = L + 1;
  const Stem& stem = out_.stems[id];
  const int segs = stem.segments;
  const int count = share(static_cast<int>(s_.branches[C]), p.start_segment, segs);
  if (count <= 0) return;
  if (out_.stems.size() + queue_.size() + count > kMaxStems)
    throw ValidationError("tree too complex: stem limit exceeded");

  const double zone = L == 0 ? s_.trunk_height : s_.secondary_base;
  const double lo = std::max(zone, double(p.start_segment) / segs);
  if (lo >= 1.0) return;
  const double expo = s_.branch_dist > 0.0 ? 1.0 / s_.branch_dist : 1.0;
  auto place = [&](double frac) { return lo + (1.0 - lo) * std::pow(frac, expo); };

  struct Slot {
    double t;
    double roll;
  };
  std::vector<Slot> slots;
  slots.reserve(static_cast<std::size_t>(count));
  const double roll_base = s_.branch_rotate + L * s_.parent_roll;
  if (L == 0 && s_.whorls > 0) {
    const int rings = s_.whorls;
    for (int j = 0; j < rings; ++j) {
      const int in_ring = count / rings + (j < count % rings ? 1 : 0);
      const double t = place((j + 0.5) / rings);
      for (int m = 0; m < in_ring; ++m) {
        const double roll = roll_base + j * s_.rotate[C] + m * 360.0 / in_ring +
                            rng_.signed_unit() * s_.rotate_v[C];
        slots.push_back({t, roll});
      }
    }
  } else {
    double acc = roll_base;
    for (int i = 0; i < count; ++i) {
      const double t = place((i + 0.5) / count);
      double roll = 0.0;
      if (s_.mode == "random") {
        roll = rng_.uniform(0.0, 360.0);
      } else if (s_.mode == "distance") {
        roll = roll_base + i * 360.0 / count + rng_.signed_unit() * s_.rotate_v[C];
      } else {
        acc += s_.rotate[C] + rng_.signed_unit() * s_.rotate_v[C];
        roll = acc;
      }
      slots.push_back({t, roll});
    }
  }

  const double shared_down = s_.old_down_var ? rng_.signed_unit() : 0.0;
  const double parent_r = p.base_radius * p.radius_factor;
  for (const Slot& slot : slots) {
    const StemPoint sp = sample_stem(out_.stems[id], slot.t);
    const double var = s_.old_down_var ? shared_down : rng_.signed_unit();
    const double down = s_.down[C] + var * s_.down_v[C];
    const double position = C == 1 ? (slot.t - zone) / std::max(1e-9, 1.0 - zone) : slot.t;
    const double stretch = std::max(0.0, s_.length[C] + rng_.signed_unit() * s_.length_v[C]);
    const double len = p.length * stretch * s_.child_shape(C, position);
    if (len <= 1e-6 * out_.trunk_length) continue;

    Vec3 axis = rotate(sp.normal, sp.tangent, radians(slot.roll));
    if (s_.mode == "rotate") {
      const Vec3 radial{sp.pos.x, sp.pos.y, 0.0};
      const Vec3 out_axis = cross(sp.tangent, radial);
      if (norm(radial) > 1e-6 * out_.trunk_length && norm(out_axis) > 1e-9)
        axis = rotate(normalized(out_axis), sp.tangent,
                      radians(rng_.signed_unit() * s_.rotate_v[C]));
    }
    Pending c;
    c.level = C;
    c.parent = id;
    c.attach = slot.t;
    c.origin = sp.pos;
    if (s_.use_parent_angle) {
      c.direction = rotate(sp.tangent, axis, radians(down));
      c.normal = axis;
    } else {
      const Vec3 flat = orthogonalize(axis, kUp);
      c.direction = rotate(kUp, flat, radians(down));
      c.normal = flat;
    }
    c.length = len;
    const double r = child_radius(parent_r, len, p.length, s_.ratio_power, s_.tweak[C], s_.min_radius);
    c.base_radius = std::max(s_.min_radius, std::min(r, out_.stems[id].radius_at(slot.t)));
    queue_.push_back(c);
  }
}

void Grower::add_leaves(const Pending& p, std::size_t id) {
  if (!s_.show_leaves || s_.leaves <= 0 || s_.leaf_scale <= 0.0) return;
  const int L = p.level;
  const Stem& stem = out_.stems[id];
  const int count = share(s_.leaves, p.start_segment, stem.segments);
  if (count <= 0) return;
  if (out_.leaves.size() + count > kMaxLeaves)
    throw ValidationError("tree too complex: leaf limit exceeded");

  const double lo = std::max(L == 0 ? s_.trunk_height : 0.0, double(p.start_segment) / stem.segments);
  if (lo >= 1.0) return;
  double roll = 0.0;
  for (int k = 0; k < count; ++k) {
    const double t = lo + (1.0 - lo) * (k + 0.5) / count;
    const StemPoint sp = sample_stem(stem, t);
    roll += s_.leaf_roll + rng_.signed_unit() * s_.leaf_roll_v;
    const double down = s_.leaf_down + rng_.signed_unit() * s_.leaf_down_v;
    const double size_draw = rng_.signed_unit();

    const Vec3 axis = rotate(sp.normal, sp.tangent, radians(roll));
    Vec3 dir = rotate(sp.tangent, axis, radians(down));
    if (s_.leaf_angle != 0.0) {
      const Vec3 tilt = cross(dir, -kUp);
      if (norm(tilt) > 1e-9) {
        const double turn = std::min(radians(s_.leaf_angle), angle_between(dir, -kUp));
        dir = rotate(dir, normalized(tilt), turn);
      }
    }
    Vec3 side;
    if (s_.horizontal_leaves) {
      Vec3 flat = dir - kUp * dot(dir, kUp);
      dir = norm(flat) > 1e-9 ? normalized(flat) : orthogonalize(axis, kUp);
      side = cross(kUp, dir);
    } else {
      side = orthogonalize(axis, dir);
    }

    const double size = s_.leaf_scale * (1.0 + size_draw * s_.leaf_scale_v) *
                        shape_ratio(s_.leaf_dist, L, t, s_.custom) *
                        (1.0 - s_.leaf_taper * (t - 0.5));
    const double width = size * s_.leaf_scale_x;
    if (!(size > 0.0) || !(width > 0.0)) continue;
    out_.leaves.push_back({sp.pos, dir, side, size, width, id, t});
  }
}

Vec3 catmull_rom(const Vec3& p0, const Vec3& p1, const Vec3& p2, const Vec3& p3, double u) {
  const double u2 = u * u, u3 = u2 * u;
  return (p1 * 2.0 + (p2 - p0) * u + (p0 * 2.0 - p1 * 5.0 + p2 * 4.0 - p3) * u2 +
          (p1 * 3.0 - p0 - p2 * 3.0 + p3) * u3) *
         0.5;
}

void sweep_stem(const Stem& stem, int ring, int subdivisions, bool close_tip, Mesh& mesh) {
  const auto& P = stem.control_points;
  const int k = static_cast<int>(P.size()) - 1;
  if (k < 1) return;
  auto at = [&](int i) {
    if (i < 0) return P[0] * 2.0 - P[1];
    if (i > k) return P[k] * 2.0 - P[k - 1];
    return P[i];
  };

  std::vector<Vec3> centers;
  std::vector<double> radii;
  for (int j = 0; j < k; ++j) {
    for (int q = 0; q < subdivisions; ++q) {
      const double u = double(q) / subdivisions;
      centers.push_back(q == 0 ? P[j] : catmull_rom(at(j - 1), at(j), at(j + 1), at(j + 2), u));
      radii.push_back(stem.radius_at((stem.start_segment + j + u) / stem.segments));
    }
  }
  centers.push_back(P[k]);
  radii.push_back(stem.radius_at(1.0));

  const std::size_t n = centers.size();
  std::vector<std::uint32_t> first(n);
  Vec3 normal = stem.frame_normals.front();
  Vec3 tangent;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& ahead = centers[std::min(i + 1, n - 1)];
    const Vec3& behind = centers[i == 0 ? 0 : i - 1];
    tangent = normalized(ahead - behind);
    normal = orthogonalize(normal, tangent);
    const Vec3 binormal = cross(tangent, normal);
    first[i] = static_cast<std::uint32_t>(mesh.vertices.size());
    for (int q = 0; q < ring; ++q) {
      const double a = 2.0 * kPi * q / ring;
      const Vec3 offset = (normal * std::cos(a) + binormal * std::sin(a)) * radii[i];
      mesh.add_vertex(centers[i] + offset, centers[i]);
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (int q = 0; q < ring; ++q) {
      const std::uint32_t a0 = first[i] + q, a1 = first[i] + (q + 1) % ring;
      const std::uint32_t b0 = first[i + 1] + q, b1 = first[i + 1] + (q + 1) % ring;
      mesh.add_triangle(a0, a1, b1);
      mesh.add_triangle(a0, b1, b0);
    }
  }
  if (close_tip) {
    const std::uint32_t tip = mesh.add_vertex(centers.back(), centers.back());
    for (int q = 0; q < ring; ++q)
      mesh.add_triangle(first[n - 1] + q, first[n - 1] + (q + 1) % ring, tip);
  }
}

void add_leaf(const Leaf& leaf, bool hexagon, Mesh& mesh) {
  const Vec3 half = leaf.side * (leaf.width * 0.5);
  const Vec3 tip = leaf.base + leaf.direction * leaf.length;
  if (!hexagon) {
    const auto a = mesh.add_vertex(leaf.base - half);
    const auto b = mesh.add_vertex(leaf.base + half);
    const auto c = mesh.add_vertex(tip + half);
    const auto d = mesh.add_vertex(tip - half);
    mesh.add_triangle(a, b, c);
    mesh.add_triangle(a, c, d);
    return;
  }
  const Vec3 low = leaf.base + leaf.direction * (leaf.length * 0.3);
  const Vec3 high = leaf.base + leaf.direction * (leaf.length * 0.7);
  const std::uint32_t v[6] = {mesh.add_vertex(leaf.base), mesh.add_vertex(low + half),
                              mesh.add_vertex(high + half), mesh.add_vertex(tip),
                              mesh.add_vertex(high - half), mesh.add_vertex(low - half)};
  for (int i = 1; i < 5; ++i) mesh.add_triangle(v[0], v[i], v[i + 1]);
}

}  // namespace

TreeStructure grow_structure(const TreeParams& params, std::uint64_t seed) {
  if (const auto violations = validate(params); !violations.empty())
    throw ValidationError(describe(violations.front()));
  return Grower(params, seed).run();
}

TreeMeshes build_meshes(const TreeStructure& structure, const TreeParams& params) {
  TreeMeshes out;
  out.skeleton.part = MeshPart::Skeleton;
  out.foliage.part = MeshPart::Foliage;
  const int ring = 2 * (params.integer(pn::kBevelResolution) + 2);
  const int subdivisions = params.label(pn::kHandleType) == "vector" ? 1 : 3;
  const bool close_tip = params.flag(pn::kCloseTip);
  for (const Stem& stem : structure.stems) sweep_stem(stem, ring, subdivisions, close_tip, out.skeleton);
  const bool hexagon = params.label(pn::kLeafShape) == "hexagonal";
  for (const Leaf& leaf : structure.leaves) add_leaf(leaf, hexagon, out.foliage);
  return out;
}

TreeMeshes grow_tree(const TreeParams& params, std::uint64_t seed) {
  TreeMeshes meshes = build_meshes(grow_structure(params, seed), params);
  if (meshes.skeleton.empty()) throw ValidationError("degenerate tree");
  return meshes;
}

TreeMeshes grow_tree(const TreeParams& params) {
  if (const auto violations = validate(params); !violations.empty())
    throw ValidationError(describe(violations.front()));
  return grow_tree(params, static_cast<std::uint64_t>(params.scalar(pn::kRandomSeed)));
}

}  // namespace treesketch
