#include <doctest.h>

#include "fixtures.hpp"
#include "treesketch/errors.hpp"
#include "treesketch/raster.hpp"
#include "treesketch/sketch.hpp"
#include "treesketch/species_profile.hpp"
#include "treesketch/synthesis.hpp"

using namespace treesketch;

namespace {

// Random triangles plus their reflection through the XZ plane.
Mesh mirror_symmetric(std::uint64_t seed, MeshPart part) {
  Rng rng(seed);
  Mesh m;
  m.part = part;
  for (int t = 0; t < 40; ++t) {
    std::uint32_t a[3], b[3];
    for (int k = 0; k < 3; ++k) {
      const Vec3 v{rng.uniform(-1, 2), rng.uniform(-1, 1), rng.uniform(0, 3)};
      a[k] = m.add_vertex(v);
      b[k] = m.add_vertex({v.x, -v.y, v.z});
    }
    m.add_triangle(a[0], a[1], a[2]);
    m.add_triangle(b[0], b[2], b[1]);
  }
  return m;
}

}  // namespace

TEST_CASE("view names round-trip") {
  for (auto v : kAllViews) CHECK(parse_view(view_name(v)) == v);
  CHECK_THROWS_AS(parse_view("top"), ValidationError);
}

TEST_CASE("canonical cameras face the box centre from the four sides") {
  Box3 box;
  box.extend(Vec3{-1, -2, 0});
  box.extend(Vec3{3, 2, 5});
  for (auto v : kAllViews) {
    const auto cam = canonical_camera(v, box);
    CHECK(norm(cam.forward) == doctest::Approx(1.0));
    CHECK(dot(cam.forward, cam.up) == doctest::Approx(0.0));
    CHECK(norm(cam.eye() + cam.forward * cam.distance - box.center()) == doctest::Approx(0.0));
    CHECK(cam.distance > 0.5 * norm(box.extent()));
  }
  CHECK(canonical_camera(View::Front, box).forward.y == 1.0);
  CHECK(canonical_camera(View::Back, box).forward.y == -1.0);
}

TEST_CASE("silhouettes are binary and framed") {
  const auto m = fixtures::box_mesh({-1, -1, 0}, {1, 1, 4});
  const auto img = render_part(m, canonical_camera(View::Front, m.bounds()), 64);
  CHECK(img.binary());
  CHECK(img.dark_count() > 0);
  for (int x = 0; x < 64; ++x) CHECK(img.at(x, 0) == 1.0f);
  CHECK(render_part(Mesh{}, canonical_camera(View::Front, m.bounds()), 32) == RasterImage(32, 32));
}

TEST_CASE("meshes outside the frame are rejected") {
  const auto m = fixtures::box_mesh({-1, -1, 0}, {1, 1, 1});
  CHECK_THROWS_WITH_AS(render_part(m, look_at({0, 0, 0.5}, {0, 5, 0.5}), 32), "tree not framed",
                       ValidationError);
  CHECK_THROWS_WITH_AS(render_part(m, look_at({100, -10, 0}, {200, -10, 0}), 32), "tree not framed",
                       ValidationError);
}

TEST_CASE("back view equals the mirrored front view on a symmetric mesh") {
  const auto sk = mirror_symmetric(1, MeshPart::Skeleton);
  const auto fo = mirror_symmetric(2, MeshPart::Foliage);
  auto all = sk;
  all.append(fo);
  const auto front = canonical_camera(View::Front, all.bounds());
  const auto back = canonical_camera(View::Back, all.bounds());
  for (int res : {64, 101, 256}) {
    CAPTURE(res);
    CHECK(render_part(sk, back, res) == flip_horizontal(render_part(sk, front, res)));
    CHECK(render_gt(sk, fo, back, res) == flip_horizontal(render_gt(sk, fo, front, res)));
    CHECK(sketch_tree(sk, fo, back, res) == flip_horizontal(sketch_tree(sk, fo, front, res)));
  }
}

TEST_CASE("ground truth renders use two tones with depth testing") {
  const auto trunk = fixtures::box_mesh({-0.2, -2, 0}, {0.2, -1.8, 3});
  const auto crown = fixtures::box_mesh({-1, -1, 0}, {1, 1, 3}, MeshPart::Foliage);
  auto all = trunk;
  all.append(crown);
  const auto img = render_gt(trunk, crown, canonical_camera(View::Front, all.bounds()), 96);
  std::size_t dark = 0, grey = 0;
  for (float v : img.data()) {
    CHECK((v == 0.0f || v == 0.4f || v == 1.0f));
    dark += v == 0.0f;
    grey += v == 0.4f;
  }
  CHECK(dark > 0);
  CHECK(grey > 0);
  // From behind, the crown hides the trunk entirely.
  const auto hidden = render_gt(trunk, crown, canonical_camera(View::Back, all.bounds()), 96);
  for (float v : hidden.data()) CHECK(v != 0.0f);
}

TEST_CASE("thinning narrows skeleton strokes") {
  const auto tree = grow_tree(randomize(standard_profile(Species::Bonsai), 1), 1);
  const auto cam = canonical_camera(View::Front, tree.skeleton.bounds());
  const auto thin = render_part(tree.skeleton, cam, 200, 0.8);
  const auto full = render_part(tree.skeleton, cam, 200, 1.0);
  CHECK(thin.dark_count() < full.dark_count());
}

TEST_CASE("OBJ text round-trips vertices and faces") {
  const auto tree = grow_tree(randomize(standard_profile(Species::Palm), 1), 1);
  for (const Mesh* m : {&tree.skeleton, &tree.foliage}) {
    const auto back = mesh_from_obj(to_obj(*m));
    CHECK(back.part == m->part);
    CHECK(back.triangles == m->triangles);
    REQUIRE(back.vertices.size() == m->vertices.size());
    for (std::size_t i = 0; i < back.vertices.size(); ++i) {
      CHECK(back.vertices[i].x == m->vertices[i].x);
      CHECK(back.vertices[i].z == m->vertices[i].z);
    }
  }
  CHECK_THROWS(mesh_from_obj("v 0 0 0\nf 1 2 3\n"));
}

TEST_CASE("PNG files round-trip 8-bit samples") {
  const auto dir = fixtures::scratch_dir("png");
  const auto img = fixtures::random_binary(37, 21, 9);
  write_png(img, dir / "a.png");
  CHECK(read_png(dir / "a.png") == img);
  CHECK_THROWS_AS(read_png(dir / "missing.png"), IoError);
}
