#include "treesketch/mesh.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "treesketch/errors.hpp"

namespace treesketch {

std::string_view part_name(MeshPart p) { return p == MeshPart::Skeleton ? "skeleton" : "foliage"; }

MeshPart parse_part(std::string_view name) {
  if (name == "skeleton") return MeshPart::Skeleton;
  if (name == "foliage") return MeshPart::Foliage;
  throw ValidationError("unknown mesh part '" + std::string(name) + "'");
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * norm(cross(b - a, c - a));
}

Box3 Mesh::bounds() const {
  Box3 b;
  for (const auto& v : vertices) b.extend(v);
  return b;
}

double Mesh::area() const {
  double total = 0;
  for (const auto& t : triangles) total += triangle_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
  return total;
}

std::uint32_t Mesh::add_vertex(const Vec3& v) {
  vertices.push_back(v);
  return static_cast<std::uint32_t>(vertices.size() - 1);
}

std::uint32_t Mesh::add_vertex(const Vec3& v, const Vec3& axis) {
  axis_points.push_back(axis);
  return add_vertex(v);
}

bool Mesh::add_triangle(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
  if (a == b || b == c || a == c) return false;
  if (!(triangle_area(vertices[a], vertices[b], vertices[c]) > 0.0)) return false;
  triangles.push_back({a, b, c});
  return true;
}

void Mesh::append(const Mesh& other) {
  const auto base = static_cast<std::uint32_t>(vertices.size());
  const bool keep_axis = axis_points.size() == vertices.size() &&
                         other.axis_points.size() == other.vertices.size();
  vertices.insert(vertices.end(), other.vertices.begin(), other.vertices.end());
  if (keep_axis) {
    axis_points.insert(axis_points.end(), other.axis_points.begin(), other.axis_points.end());
  } else {
    axis_points.clear();
  }
  for (const auto& t : other.triangles) triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
}

Mesh rotated_about_z(const Mesh& mesh, double angle) {
  Mesh out = mesh;
  for (auto& v : out.vertices) v = rotate_z(v, angle);
  for (auto& a : out.axis_points) a = rotate_z(a, angle);
  return out;
}

std::string to_obj(const Mesh& mesh) {
  std::string out;
  out.reserve(mesh.vertices.size() * 64 + mesh.triangles.size() * 24);
  out += "o ";
  out += part_name(mesh.part);
  out += '\n';
  char buf[128];
  for (const auto& v : mesh.vertices) {
    // %.17g round-trips doubles exactly.
    const int n = std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x, v.y, v.z);
    out.append(buf, static_cast<std::size_t>(n));
  }
  for (const auto& t : mesh.triangles) {
    const int n = std::snprintf(buf, sizeof buf, "f %u %u %u\n", t[0] + 1, t[1] + 1, t[2] + 1);
    out.append(buf, static_cast<std::size_t>(n));
  }
  return out;
}

namespace {

std::string_view next_token(std::string_view& line) {
  std::size_t i = 0;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  std::size_t j = i;
  while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
  auto tok = line.substr(i, j - i);
  line.remove_prefix(j);
  return tok;
}

double parse_double(std::string_view tok, std::size_t line_no) {
  double v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw ValidationError("OBJ line " + std::to_string(line_no) + ": bad number '" + std::string(tok) + "'");
  return v;
}

}  // namespace

Mesh mesh_from_obj(std::string_view text) {
  Mesh mesh;
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto eol = text.find('\n');
    auto line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    ++line_no;
    auto tag = next_token(line);
    if (tag == "v") {
      Vec3 v;
      v.x = parse_double(next_token(line), line_no);
      v.y = parse_double(next_token(line), line_no);
      v.z = parse_double(next_token(line), line_no);
      mesh.vertices.push_back(v);
    } else if (tag == "f") {
      std::vector<std::uint32_t> idx;
      for (auto tok = next_token(line); !tok.empty(); tok = next_token(line)) {
        tok = tok.substr(0, tok.find('/'));
        long long i = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), i);
        if (ec != std::errc() || i == 0)
          throw ValidationError("OBJ line " + std::to_string(line_no) + ": bad face index");
        if (i < 0) i += static_cast<long long>(mesh.vertices.size()) + 1;
        if (i <= 0 || static_cast<std::size_t>(i) > mesh.vertices.size())
          throw ValidationError("OBJ line " + std::to_string(line_no) + ": face index out of range");
        idx.push_back(static_cast<std::uint32_t>(i - 1));
      }
      if (idx.size() < 3) throw ValidationError("OBJ line " + std::to_string(line_no) + ": face needs 3 indices");
      for (std::size_t k = 1; k + 1 < idx.size(); ++k) mesh.triangles.push_back({idx[0], idx[k], idx[k + 1]});
    } else if (tag == "o" || tag == "g") {
      auto name = next_token(line);
      if (name == "skeleton" || name == "foliage") mesh.part = parse_part(name);
    }
  }
  return mesh;
}

void save_obj(const Mesh& mesh, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << to_obj(mesh);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Mesh load_obj(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return mesh_from_obj(ss.str());
}

}  // namespace treesketch
