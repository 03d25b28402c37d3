#pragma once

#include <array>
#include <string_view>

#include "treesketch/geometry.hpp"
#include "treesketch/image.hpp"
#include "treesketch/mesh.hpp"

namespace treesketch {

enum class View { Front, Back, Left, Right };

inline constexpr std::array<View, 4> kAllViews = {View::Front, View::Back, View::Left, View::Right};

std::string_view view_name(View v);
View parse_view(std::string_view name);

// Pinhole camera. `forward` and `up` are unit and orthogonal; the eye sits at
// target - forward * distance.
struct CameraView {
  Vec3 target;
  Vec3 forward{0, 1, 0};
  Vec3 up = kUp;
  double distance = 1.0;
  double fov_deg = 40.0;  // vertical

  Vec3 eye() const { return target - forward * distance; }
  Vec3 right() const { return cross(forward, up); }
};

inline constexpr double kCanonicalFov = 40.0;
inline constexpr double kFrameFill = 0.9;

// Cameras on the -Y (front), +Y (back), -X (left), +X (right) axes through the
// box center, backed off so the bounding sphere fills 90% of the frame height.
CameraView canonical_camera(View view, const Box3& bounds);

// Free pose looking from `eye` to `target`.
CameraView look_at(const Vec3& eye, const Vec3& target, double fov_deg = kCanonicalFov);

inline constexpr double kDefaultThinning = 0.8;

// Flat-black silhouette over white. Skeleton meshes that carry axis points are
// thinned first: every vertex moves toward its axis point by `thinning`.
// Throws ValidationError("tree not framed") when the mesh crosses behind the
// camera or no vertex projects inside the image.
RasterImage render_part(const Mesh& mesh, const CameraView& camera, int resolution,
                        double thinning = kDefaultThinning);

// Ground-truth style render: skeleton at 0.0 and foliage at 0.4, depth tested.
RasterImage render_gt(const Mesh& skeleton, const Mesh& foliage, const CameraView& camera, int resolution);

}  // namespace treesketch
