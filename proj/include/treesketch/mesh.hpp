#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "treesketch/geometry.hpp"

namespace treesketch {

enum class MeshPart { Skeleton, Foliage };

std::string_view part_name(MeshPart p);
MeshPart parse_part(std::string_view name);

// Indexed triangle mesh. Skeleton meshes produced by the generator also carry,
// per vertex, the point on the stem axis the vertex was swept around; the
// renderer uses it to thin branches. It is not part of the interchange format.
struct Mesh {
  MeshPart part = MeshPart::Skeleton;
  std::vector<Vec3> vertices;
  std::vector<std::array<std::uint32_t, 3>> triangles;
  std::vector<Vec3> axis_points;  // empty or same size as vertices

  bool empty() const { return triangles.empty(); }
  Box3 bounds() const;
  double area() const;
  std::uint32_t add_vertex(const Vec3& v);
  std::uint32_t add_vertex(const Vec3& v, const Vec3& axis);
  // Appends the triangle unless it has zero area; returns whether it was kept.
  bool add_triangle(std::uint32_t a, std::uint32_t b, std::uint32_t c);
  void append(const Mesh& other);
};

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

// Applies v -> R_z(angle) v to vertices and axis points.
Mesh rotated_about_z(const Mesh& mesh, double angle_rad);

// Wavefront OBJ: one object named after the part, positions and 1-based faces.
std::string to_obj(const Mesh& mesh);
Mesh mesh_from_obj(std::string_view text);
void save_obj(const Mesh& mesh, const std::filesystem::path& path);
Mesh load_obj(const std::filesystem::path& path);

}  // namespace treesketch
