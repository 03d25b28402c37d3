#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "treesketch/errors.hpp"
#include "treesketch/sketch.hpp"

using namespace treesketch;

namespace {

float clamped(const RasterImage& img, int x, int y) {
  return img.at(std::clamp(x, 0, img.width() - 1), std::clamp(y, 0, img.height() - 1));
}

RasterImage sobel_oracle(const RasterImage& img) {
  RasterImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      auto p = [&](int dx, int dy) { return clamped(img, x + dx, y + dy); };
      const float gx = (p(1, -1) - p(-1, -1)) + 2.0f * (p(1, 0) - p(-1, 0)) + (p(1, 1) - p(-1, 1));
      const float gy = (p(-1, 1) - p(-1, -1)) + 2.0f * (p(0, 1) - p(0, -1)) + (p(1, 1) - p(1, -1));
      out.at(x, y) = std::min(1.0f, std::sqrt(gx * gx + gy * gy));
    }
  return out;
}

RasterImage median_oracle(const RasterImage& img) {
  RasterImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      float v[9];
      int k = 0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) v[k++] = clamped(img, x + dx, y + dy);
      std::nth_element(v, v + 4, v + 9);
      out.at(x, y) = v[4];
    }
  return out;
}

// Dark pixel survives only if its whole (2r+1)^2 neighbourhood (clamped) is dark.
RasterImage erode_oracle(const RasterImage& img, int r) {
  RasterImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      float m = 0.0f;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) m = std::max(m, clamped(img, x + dx, y + dy));
      out.at(x, y) = m;
    }
  return out;
}

RasterImage gaussian_oracle(const RasterImage& img, double sigma) {
  const int r = std::max(1, static_cast<int>(std::ceil(3 * sigma)));
  std::vector<double> w;
  double total = 0;
  for (int i = -r; i <= r; ++i) total += w.emplace_back(std::exp(-0.5 * i * i / (sigma * sigma)));
  RasterImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      double s = 0;
      for (int j = -r; j <= r; ++j)
        for (int i = -r; i <= r; ++i) s += w[i + r] * w[j + r] * clamped(img, x + i, y + j);
      out.at(x, y) = static_cast<float>(std::clamp(s / (total * total), 0.0, 1.0));
    }
  return out;
}

}  // namespace

TEST_CASE("color ramp and background removal are binary thresholds") {
  const auto img = fixtures::random_image(40, 30, 1);
  const auto ramp = color_ramp(img, 0.3f);
  const auto matte = remove_background(img, 0.3f);
  CHECK(ramp.binary());
  CHECK(matte.binary());
  for (std::size_t i = 0; i < img.size(); ++i) {
    CHECK(ramp.data()[i] == (img.data()[i] < 0.3f ? 0.0f : 1.0f));
    CHECK(matte.data()[i] == 1.0f - ramp.data()[i]);
  }
  const auto bin = fixtures::random_binary(40, 30, 2);
  CHECK(invert(invert(bin)) == bin);
  for (std::size_t i = 0; i < img.size(); ++i) CHECK(invert(img).data()[i] == 1.0f - img.data()[i]);
}

TEST_CASE("sobel matches the direct stencil and vanishes on constant images") {
  const auto img = fixtures::random_image(33, 17, 2);
  CHECK(sobel(img) == sobel_oracle(img));
  for (float c : {0.0f, 0.37f, 1.0f}) {
    const auto s = sobel(RasterImage(20, 20, c));
    CHECK(s.dark_count() == s.size());
    CHECK(s.mean() == 0.0);
  }
  const auto bin = fixtures::random_binary(25, 25, 3);
  CHECK(sobel(bin).binary());
  CHECK_THROWS_AS(sobel(RasterImage(2, 5)), ValidationError);
}

TEST_CASE("denoise is a clamped 3x3 median") {
  const auto img = fixtures::random_image(29, 23, 4);
  CHECK(denoise(img) == median_oracle(img));
  RasterImage speck(9, 9, 1.0f);
  speck.at(4, 4) = 0.0f;
  CHECK(denoise(speck) == RasterImage(9, 9, 1.0f));
}

TEST_CASE("erosion shrinks the dark set") {
  for (int r : {0, 1, 2, 3}) {
    const auto img = fixtures::random_binary(41, 37, 5 + r, 0.8);
    const auto e = erode(img, r);
    CHECK(e == erode_oracle(img, r));
    CHECK(e.dark_count() <= img.dark_count());
  }
  CHECK_THROWS_WITH_AS(erode(fixtures::random_image(8, 8, 1), 1), "erode requires binary image", ValidationError);
}

TEST_CASE("gaussian blur matches a 2D oracle") {
  const auto img = fixtures::random_binary(31, 27, 6);
  const auto g = gaussian(img, 1.7);
  const auto o = gaussian_oracle(img, 1.7);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(g.data()[i] - o.data()[i]) < 1e-5);
  const auto flat = gaussian(RasterImage(16, 16, 0.5f), 3.0);
  for (float v : flat.data()) CHECK(v == doctest::Approx(0.5f).epsilon(1e-5));
  CHECK_THROWS_AS(gaussian(img, 0.0), ValidationError);
}

TEST_CASE("multiply mix never exceeds either input") {
  const auto a = fixtures::random_image(30, 30, 7), b = fixtures::random_image(30, 30, 8);
  const auto m = multiply_mix(a, b);
  for (std::size_t i = 0; i < m.size(); ++i) CHECK(m.data()[i] <= std::min(a.data()[i], b.data()[i]));
  CHECK_THROWS_AS(multiply_mix(a, RasterImage(30, 31)), ValidationError);
}

TEST_CASE("input resizing averages areas and refuses to upscale") {
  const auto r = resize_for_input(RasterImage(608, 608, 0.25f));
  CHECK(r.width() == 224);
  CHECK(r.height() == 224);
  for (float v : r.data()) CHECK(v == doctest::Approx(0.25f));
  RasterImage half(100, 100, 1.0f);
  for (int y = 0; y < 100; ++y)
    for (int x = 0; x < 50; ++x) half.at(x, y) = 0.0f;
  const auto h = resize_for_input(half, 10);
  CHECK(h.at(0, 0) == 0.0f);
  CHECK(h.at(9, 9) == 1.0f);
  CHECK(h.mean() == doctest::Approx(0.5));
  CHECK_THROWS_AS(resize_for_input(RasterImage(100, 100), 200), ValidationError);
  CHECK(resize_for_input(RasterImage(100, 100), 200, Upscale::PassThrough).width() == 100);
  CHECK_THROWS_AS(resize_for_input(RasterImage(100, 90)), ValidationError);
}

TEST_CASE("both chains and the mixed sketch are binary") {
  RasterImage raw(120, 120, 1.0f);
  for (int y = 20; y < 100; ++y)
    for (int x = 55; x < 65; ++x) raw.at(x, y) = 0.0f;
  for (int y = 10; y < 50; ++y)
    for (int x = 30; x < 90; ++x) raw.at(x, y) = std::min(raw.at(x, y), 0.4f);
  const auto s = skeleton_chain(raw), f = foliage_chain(raw);
  CHECK(s.binary());
  CHECK(f.binary());
  CHECK(s.dark_count() > 0);
  CHECK(f.dark_count() > 0);
  CHECK(multiply_mix(s, f).binary());
  CHECK(skeleton_chain(RasterImage(50, 50, 1.0f)) == RasterImage(50, 50, 1.0f));
}

TEST_CASE("sketching a mesh yields a binary image of the requested size") {
  const auto trunk = fixtures::box_mesh({-0.1, -0.1, 0}, {0.1, 0.1, 2});
  const auto crown = fixtures::box_mesh({-0.6, -0.6, 1.2}, {0.6, 0.6, 2.2}, MeshPart::Foliage);
  auto all = trunk;
  all.append(crown);
  const auto cam = canonical_camera(View::Front, all.bounds());
  const auto img = sketch_tree(trunk, crown, cam, 128);
  CHECK(img.width() == 128);
  CHECK(img.binary());
  CHECK(img.dark_count() > 0);
  CHECK(sketch_tree(trunk, Mesh{}, cam, 128).binary());
}
