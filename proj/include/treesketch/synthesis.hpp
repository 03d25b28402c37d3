#pragma once

// Weber-Penn style tree growth: stem structure from a parameter dictionary,
// then swept-tube skeleton and leaf-quad foliage meshes.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "treesketch/geometry.hpp"
#include "treesketch/mesh.hpp"
#include "treesketch/params.hpp"

namespace treesketch {

// radius_trunk = length_trunk * ratio * (scale0 + draw * scaleV0), draw in [-1, 1].
// Throws ValidationError("degenerate trunk radius") when the result is not positive.
double trunk_radius(double trunk_length, double ratio, double scale0, double scale_v0, double variation_draw);

// max(min_radius, parent_radius * (child_len / parent_len)^ratio_power * tweak).
double child_radius(double parent_radius, double child_len, double parent_len, double ratio_power,
                    double tweak, double min_radius);

struct SplitDecision {
  int splits = 0;      // n
  double error = 0.0;  // carried fractional error

  // Stems leaving a split event: the continuation alone, or n + 1.
  int stems() const { return splits + 1; }
};

// Integer split count with additive error diffusion; segSplits in [0, 3].
SplitDecision split_count(double seg_splits, double error_acc);

enum class TreeShape {
  Conical,
  Spherical,
  Hemispherical,
  Cylindrical,
  TaperedCylindrical,
  Flame,
  InverseConical,
  TendFlame,
  Envelope,
  Custom,
};

TreeShape parse_shape(std::string_view label);

// Length multiplier for a child stem at `position` along its parent
// (0 = parent base, 1 = parent tip). Custom shapes return custom[level].
// Always > 0.
double shape_ratio(TreeShape shape, int level, double position,
                   std::span<const double> custom = {});

struct Stem {
  int level = 0;
  std::vector<Vec3> control_points;
  std::vector<double> radii;        // radius at each control point
  std::vector<Vec3> frame_normals;  // reference normal at each control point
  std::optional<std::size_t> parent;
  double attach = 0.0;   // fraction of the parent's length where this stem starts
  bool clone = false;    // produced by a split rather than branching
  int start_segment = 0; // first segment index on the level's segment grid
  int segments = 1;      // curveRes for the level
  double length = 0.0;   // full nominal length (clones share the original's)
  double base_radius = 0.0;
  double radius_factor = 1.0;
  double taper = 0.0;
  double min_radius = 0.0;
  double flare = 0.0;

  // Radius at fraction z of the nominal length; non-increasing in z.
  double radius_at(double z) const;
};

struct Leaf {
  Vec3 base;
  Vec3 direction;  // unit, along the leaf length
  Vec3 side;       // unit, across the leaf width
  double length = 0.0;
  double width = 0.0;
  std::size_t stem = 0;
  double attach = 0.0;
};

struct SplitEvent {
  std::size_t stem = 0;
  int level = 0;
  int segment = 0;
  std::vector<Vec3> directions;  // continuation first, then clones
};

struct TreeStructure {
  std::vector<Stem> stems;
  std::vector<Leaf> leaves;
  std::vector<SplitEvent> splits;
  double trunk_length = 0.0;
};

struct TreeMeshes {
  Mesh skeleton;
  Mesh foliage;
};

// Guards against parameter combinations that explode combinatorially.
inline constexpr std::size_t kMaxStems = 200000;
inline constexpr std::size_t kMaxLeaves = 1000000;

TreeStructure grow_structure(const TreeParams& params, std::uint64_t seed);
TreeMeshes build_meshes(const TreeStructure& structure, const TreeParams& params);

TreeMeshes grow_tree(const TreeParams& params, std::uint64_t seed);
// Uses the dictionary's own Random Seed.
TreeMeshes grow_tree(const TreeParams& params);

}  // namespace treesketch
