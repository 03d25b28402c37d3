#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "fixtures.hpp"
#include "treesketch/simd/kernels.hpp"
#include "treesketch/sketch.hpp"

using namespace treesketch;
namespace simd = treesketch::simd;

namespace {

std::vector<float> floats(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<float> v(n);
  for (auto& x : v) x = static_cast<float>(rng.uniform());
  return v;
}

// Odd lengths exercise the vector tails.
constexpr std::size_t kLengths[] = {0, 1, 3, 7, 8, 9, 16, 31, 100, 608};

struct BackendGuard {
  simd::Backend saved = simd::active_backend();
  ~BackendGuard() { simd::set_active(saved); }
};

}  // namespace

TEST_CASE("scalar backend is always available") {
  CHECK(simd::backend_available(simd::Backend::Scalar));
  CHECK(&simd::kernels_for(simd::Backend::Scalar) == &simd::scalar_kernels());
}

TEST_CASE("AVX2 kernels match the scalar reference bit for bit") {
  if (!simd::backend_available(simd::Backend::Avx2)) {
    MESSAGE("AVX2 unavailable; nothing to compare");
    return;
  }
  const auto& s = simd::scalar_kernels();
  const auto& v = *simd::avx2_kernels();
  for (std::size_t n : kLengths) {
    CAPTURE(n);
    const auto a = floats(n, n + 1), b = floats(n, n + 2), c = floats(n, n + 3);
    std::vector<float> os(n), ov(n);

    s.step(a.data(), os.data(), n, 0.4f, 0.0f, 1.0f);
    v.step(a.data(), ov.data(), n, 0.4f, 0.0f, 1.0f);
    CHECK(os == ov);
    s.invert(a.data(), os.data(), n);
    v.invert(a.data(), ov.data(), n);
    CHECK(os == ov);
    s.multiply(a.data(), b.data(), os.data(), n);
    v.multiply(a.data(), b.data(), ov.data(), n);
    CHECK(os == ov);
    s.max(a.data(), b.data(), os.data(), n);
    v.max(a.data(), b.data(), ov.data(), n);
    CHECK(os == ov);
    os = c;
    ov = c;
    s.accumulate(a.data(), 0.37f, os.data(), n);
    v.accumulate(a.data(), 0.37f, ov.data(), n);
    CHECK(os == ov);
    s.sobel_row(a.data(), b.data(), c.data(), os.data(), n);
    v.sobel_row(a.data(), b.data(), c.data(), ov.data(), n);
    CHECK(os == ov);
    s.median3_row(a.data(), b.data(), c.data(), os.data(), n);
    v.median3_row(a.data(), b.data(), c.data(), ov.data(), n);
    CHECK(os == ov);

    for (std::size_t radius : {std::size_t(1), std::size_t(4), std::size_t(18)}) {
      const auto padded = floats(n + 2 * radius, n + radius);
      const auto w = floats(2 * radius + 1, radius);
      s.convolve_row(padded.data(), w.data(), radius, os.data(), n);
      v.convolve_row(padded.data(), w.data(), radius, ov.data(), n);
      CHECK(os == ov);
    }

    std::vector<double> xs(n), ys(n), zs(n);
    Rng rng(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = rng.signed_unit(), ys[i] = rng.signed_unit(), zs[i] = rng.signed_unit();
    CHECK(s.min_sq_distance(0.1, -0.2, 0.3, xs.data(), ys.data(), zs.data(), n) ==
          v.min_sq_distance(0.1, -0.2, 0.3, xs.data(), ys.data(), zs.data(), n));

    // Reassociated reduction: equal up to rounding.
    const double ds = s.sq_distance(a.data(), b.data(), n), dv = v.sq_distance(a.data(), b.data(), n);
    CHECK(dv == doctest::Approx(ds).epsilon(1e-12));
  }
  CHECK(std::isinf(s.min_sq_distance(0, 0, 0, nullptr, nullptr, nullptr, 0)));
  CHECK(std::isinf(v.min_sq_distance(0, 0, 0, nullptr, nullptr, nullptr, 0)));
}

TEST_CASE("image operations agree across backends") {
  if (!simd::backend_available(simd::Backend::Avx2)) return;
  BackendGuard guard;
  const auto img = fixtures::random_image(97, 61, 3);
  const auto bin = fixtures::random_binary(97, 61, 4);
  auto run = [&] {
    return std::vector<RasterImage>{sobel(img), gaussian(img, 2.5), denoise(img), erode(bin, 2),
                                    color_ramp(img, 0.3f), multiply_mix(img, bin),
                                    resize_for_input(fixtures::random_image(608, 608, 5))};
  };
  simd::set_active(simd::Backend::Scalar);
  const auto scalar = run();
  simd::set_active(simd::Backend::Avx2);
  const auto vec = run();
  for (std::size_t i = 0; i < scalar.size(); ++i) {
    CAPTURE(i);
    CHECK(scalar[i] == vec[i]);
  }
}
