#include "treesketch/raster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "treesketch/errors.hpp"

namespace treesketch {

std::string_view view_name(View v) {
  switch (v) {
    case View::Front: return "front";
    case View::Back: return "back";
    case View::Left: return "left";
    case View::Right: return "right";
  }
  return "front";
}

View parse_view(std::string_view name) {
  for (View v : kAllViews)
    if (view_name(v) == name) return v;
  throw ValidationError("unknown view: " + std::string(name));
}

CameraView canonical_camera(View view, const Box3& bounds) {
  if (bounds.empty()) throw ValidationError("tree not framed");
  CameraView cam;
  cam.target = bounds.center();
  switch (view) {
    case View::Front: cam.forward = {0, 1, 0}; break;
    case View::Back: cam.forward = {0, -1, 0}; break;
    case View::Left: cam.forward = {1, 0, 0}; break;
    case View::Right: cam.forward = {-1, 0, 0}; break;
  }
  cam.up = kUp;
  cam.fov_deg = kCanonicalFov;
  const double radius = std::max(0.5 * norm(bounds.extent()), 1e-9);
  const double t = kFrameFill * std::tan(radians(cam.fov_deg) / 2);
  cam.distance = radius * std::sqrt(1.0 + 1.0 / (t * t));
  return cam;
}

CameraView look_at(const Vec3& eye, const Vec3& target, double fov_deg) {
  CameraView cam;
  cam.target = target;
  const Vec3 d = target - eye;
  cam.distance = norm(d);
  if (!(cam.distance > 0.0)) throw ValidationError("camera eye equals target");
  cam.forward = d / cam.distance;
  const Vec3 side = cross(cam.forward, kUp);
  cam.up = norm(side) > 1e-9 ? normalized(cross(side, cam.forward)) : any_perpendicular(cam.forward);
  cam.fov_deg = fov_deg;
  return cam;
}

namespace {

struct Projected {
  double x, y, depth;  // pixel offsets from the image center, y up
};

// Signed double area term; negates exactly under x -> -x.
inline double edge(double ax, double ay, double bx, double by, double px, double py) {
  return (bx - ax) * (py - ay) - (by - ay) * (px - ax);
}

class Rasterizer {
 public:
  Rasterizer(const CameraView& cam, int resolution)
      : cam_(cam), res_(resolution), img_(resolution, resolution, 1.0f),
        depth_(std::size_t(resolution) * resolution, std::numeric_limits<double>::infinity()) {
    if (resolution < 1) throw ValidationError("resolution must be positive");
    right_ = cam.right();
    focal_ = 0.5 * resolution / std::tan(radians(cam.fov_deg) / 2);
    near_ = 1e-3 * cam.distance;
  }

  std::vector<Projected> project(const std::vector<Vec3>& vs) {
    std::vector<Projected> out;
    out.reserve(vs.size());
    for (const Vec3& v : vs) {
      const Vec3 rel = v - cam_.target;
      const double depth = dot(rel, cam_.forward) + cam_.distance;
      if (!(depth > near_)) throw ValidationError("tree not framed");
      const Projected p{focal_ * dot(rel, right_) / depth, focal_ * dot(rel, cam_.up) / depth, depth};
      const double half = 0.5 * res_;
      if (std::abs(p.x) <= half && std::abs(p.y) <= half) any_inside_ = true;
      out.push_back(p);
    }
    return out;
  }

  void draw(const Mesh& mesh, const std::vector<Projected>& pts, float value) {
    const double half = 0.5 * res_;
    for (const auto& tri : mesh.triangles) {
      const Projected& a = pts[tri[0]];
      const Projected& b = pts[tri[1]];
      const Projected& c = pts[tri[2]];
      double area = edge(a.x, a.y, b.x, b.y, c.x, c.y);
      if (area == 0.0 || !std::isfinite(area)) continue;
      const double s = area < 0 ? -1.0 : 1.0;
      area *= s;
      const double minx = std::min({a.x, b.x, c.x}), maxx = std::max({a.x, b.x, c.x});
      const double miny = std::min({a.y, b.y, c.y}), maxy = std::max({a.y, b.y, c.y});
      // pixel i has center x = i + 0.5 - half; row j has center y = half - j - 0.5
      const int i0 = std::max(0, static_cast<int>(std::floor(minx + half - 0.5)));
      const int i1 = std::min(res_ - 1, static_cast<int>(std::ceil(maxx + half - 0.5)));
      const int j0 = std::max(0, static_cast<int>(std::floor(half - maxy - 0.5)));
      const int j1 = std::min(res_ - 1, static_cast<int>(std::ceil(half - miny - 0.5)));
      for (int j = j0; j <= j1; ++j) {
        const double py = half - j - 0.5;
        for (int i = i0; i <= i1; ++i) {
          const double px = i + 0.5 - half;
          const double w0 = s * edge(b.x, b.y, c.x, c.y, px, py);
          const double w1 = s * edge(c.x, c.y, a.x, a.y, px, py);
          const double w2 = s * edge(a.x, a.y, b.x, b.y, px, py);
          if (w0 < 0 || w1 < 0 || w2 < 0) continue;
          const double z = (w0 * a.depth + w1 * b.depth + w2 * c.depth) / area;
          const std::size_t k = std::size_t(j) * res_ + i;
          if (z < depth_[k]) {
            depth_[k] = z;
            img_.data()[k] = value;
          }
        }
      }
    }
  }

  bool any_inside() const { return any_inside_; }
  RasterImage take() { return std::move(img_); }

 private:
  CameraView cam_;
  int res_;
  RasterImage img_;
  std::vector<double> depth_;
  Vec3 right_;
  double focal_ = 1.0;
  double near_ = 0.0;
  bool any_inside_ = false;
};

std::vector<Vec3> thinned(const Mesh& mesh, double thinning) {
  if (mesh.part != MeshPart::Skeleton || mesh.axis_points.size() != mesh.vertices.size())
    return mesh.vertices;
  std::vector<Vec3> out(mesh.vertices.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Vec3& a = mesh.axis_points[i];
    out[i] = a + (mesh.vertices[i] - a) * thinning;
  }
  return out;
}

}  // namespace

RasterImage render_part(const Mesh& mesh, const CameraView& camera, int resolution, double thinning) {
  Rasterizer r(camera, resolution);
  if (mesh.empty()) return r.take();
  if (!(thinning > 0.0 && thinning <= 1.0)) throw ValidationError("thinning must be in (0, 1]");
  const auto pts = r.project(thinned(mesh, thinning));
  if (!r.any_inside()) throw ValidationError("tree not framed");
  r.draw(mesh, pts, 0.0f);
  return r.take();
}

RasterImage render_gt(const Mesh& skeleton, const Mesh& foliage, const CameraView& camera, int resolution) {
  Rasterizer r(camera, resolution);
  const auto sk = r.project(skeleton.vertices);
  const auto fo = r.project(foliage.vertices);
  if ((!skeleton.empty() || !foliage.empty()) && !r.any_inside()) throw ValidationError("tree not framed");
  r.draw(skeleton, sk, 0.0f);
  r.draw(foliage, fo, 0.4f);
  return r.take();
}

}  // namespace treesketch
