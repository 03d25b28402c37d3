#pragma once

// Inner loops of the image operations and distance queries. Each backend fills
// the same table; the scalar table is the reference. Elementwise, min/max and
// fixed-order accumulation kernels give bit-identical results across backends
// (the build disables FMA contraction). sq_distance reorders its reduction.

#include <cstddef>
#include <string_view>

namespace treesketch::simd {

struct Kernels {
  std::string_view name;

  // out = in < t ? below : above
  void (*step)(const float* in, float* out, std::size_t n, float t, float below, float above);
  // out = 1 - in
  void (*invert)(const float* in, float* out, std::size_t n);
  // out = a * b
  void (*multiply)(const float* a, const float* b, float* out, std::size_t n);
  // out = max(a, b)
  void (*max)(const float* a, const float* b, float* out, std::size_t n);
  // acc += w * row
  void (*accumulate)(const float* row, float w, float* acc, std::size_t n);

  // Sobel magnitude, clamped to 1, for one row given its edge-clamped neighbours.
  void (*sobel_row)(const float* above, const float* row, const float* below, float* out,
                    std::size_t width);
  // 3x3 median for one row given its edge-clamped neighbours.
  void (*median3_row)(const float* above, const float* row, const float* below, float* out,
                      std::size_t width);
  // Horizontal convolution with an odd-length kernel, edge clamped.
  // `padded` holds width + 2 * radius samples (the row with clamped borders).
  void (*convolve_row)(const float* padded, const float* weights, std::size_t radius, float* out,
                       std::size_t width);

  // min over i of |(x,y,z) - (xs[i],ys[i],zs[i])|^2; +inf when n == 0.
  double (*min_sq_distance)(double x, double y, double z, const double* xs, const double* ys,
                            const double* zs, std::size_t n);
  // sum (a[i] - b[i])^2
  double (*sq_distance)(const float* a, const float* b, std::size_t n);
};

enum class Backend { Scalar, Avx2 };

const Kernels& scalar_kernels();
// nullptr when the backend was not compiled in.
const Kernels* avx2_kernels();

bool backend_available(Backend b);
const Kernels& kernels_for(Backend b);

// Selected at first use: the best available backend unless TREESKETCH_SIMD=scalar.
const Kernels& active();
Backend active_backend();
// Test hook; throws when the backend is unavailable.
void set_active(Backend b);

}  // namespace treesketch::simd
