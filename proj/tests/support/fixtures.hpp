#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "treesketch/image.hpp"
#include "treesketch/mesh.hpp"
#include "treesketch/params.hpp"
#include "treesketch/rng.hpp"

namespace fixtures {

using namespace treesketch;

// Finite stand-in for open-ended ranges when drawing test values.
inline constexpr double kDrawLimit = 1000.0;

inline double draw_number(const ParamSpec& s, Rng& rng) {
  const double lo = std::isfinite(s.range.min) ? s.range.min : -kDrawLimit;
  const double hi = std::isfinite(s.range.max) ? s.range.max : kDrawLimit;
  switch (s.kind) {
    case ValueKind::Bool: return rng.coin() ? 1.0 : 0.0;
    case ValueKind::BinarySign: return rng.coin() ? 1.0 : -1.0;
    case ValueKind::Int:
    case ValueKind::Enum:
      return static_cast<double>(rng.integer(static_cast<std::int64_t>(std::ceil(lo)),
                                             static_cast<std::int64_t>(std::floor(hi))));
    case ValueKind::Float: return rng.uniform(lo, hi);
  }
  return 0.0;
}

// Any registry-valid dictionary; no attempt at a plausible tree.
inline TreeParams random_params(std::uint64_t seed, const ParamRegistry& reg = ParamRegistry::standard()) {
  Rng rng(seed);
  TreeParams p;
  for (const auto& s : reg.entries()) {
    if (s.kind == ValueKind::Enum) {
      p.set(s.name, s.labels[static_cast<std::size_t>(draw_number(s, rng))]);
    } else if (s.per_level()) {
      std::vector<double> v(kLevelCount);
      for (auto& x : v) x = draw_number(s, rng);
      p.set(s.name, v);
    } else {
      p.set(s.name, draw_number(s, rng));
    }
  }
  return p;
}

inline RasterImage random_image(int w, int h, std::uint64_t seed) {
  Rng rng(seed);
  RasterImage img(w, h);
  for (auto& v : img.data()) v = static_cast<float>(rng.uniform());
  return img;
}

inline RasterImage random_binary(int w, int h, std::uint64_t seed, double dark = 0.5) {
  Rng rng(seed);
  RasterImage img(w, h);
  for (auto& v : img.data()) v = rng.uniform() < dark ? 0.0f : 1.0f;
  return img;
}

// Axis-aligned box as 12 triangles.
inline Mesh box_mesh(const Vec3& lo, const Vec3& hi, MeshPart part = MeshPart::Skeleton) {
  Mesh m;
  m.part = part;
  for (int i = 0; i < 8; ++i)
    m.add_vertex({(i & 1) ? hi.x : lo.x, (i & 2) ? hi.y : lo.y, (i & 4) ? hi.z : lo.z});
  const std::uint32_t f[12][3] = {{0, 2, 1}, {1, 2, 3}, {4, 5, 6}, {5, 7, 6}, {0, 1, 4}, {1, 5, 4},
                                  {2, 6, 3}, {3, 6, 7}, {0, 4, 2}, {2, 4, 6}, {1, 3, 5}, {3, 7, 5}};
  for (auto& t : f) m.add_triangle(t[0], t[1], t[2]);
  return m;
}

inline Mesh random_mesh(std::size_t vertices, std::uint64_t seed) {
  Rng rng(seed);
  Mesh m;
  for (std::size_t i = 0; i < vertices; ++i)
    m.add_vertex({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
  for (std::uint32_t i = 0; i + 2 < vertices; ++i) m.add_triangle(i, i + 1, i + 2);
  return m;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("treesketch_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures
