#include <algorithm>
#include <cmath>
#include <limits>

#include "treesketch/simd/kernels.hpp"

namespace treesketch::simd {
namespace {

void step(const float* in, float* out, std::size_t n, float t, float below, float above) {
  for (std::size_t i = 0; i < n; ++i) out[i] = in[i] < t ? below : above;
}

void invert(const float* in, float* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = 1.0f - in[i];
}

void multiply(const float* a, const float* b, float* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void maximum(const float* a, const float* b, float* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::max(a[i], b[i]);
}

void accumulate(const float* row, float w, float* acc, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] = acc[i] + w * row[i];
}

void sobel_row(const float* a, const float* r, const float* b, float* out, std::size_t w) {
  for (std::size_t x = 0; x < w; ++x) {
    const std::size_t l = x == 0 ? 0 : x - 1;
    const std::size_t h = x + 1 == w ? x : x + 1;
    const float gx = (a[h] - a[l]) + 2.0f * (r[h] - r[l]) + (b[h] - b[l]);
    const float gy = (b[l] - a[l]) + 2.0f * (b[x] - a[x]) + (b[h] - a[h]);
    out[x] = std::min(1.0f, std::sqrt(gx * gx + gy * gy));
  }
}

inline float med3(float a, float b, float c) {
  return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

void median3_row(const float* a, const float* r, const float* b, float* out, std::size_t w) {
  for (std::size_t x = 0; x < w; ++x) {
    const std::size_t l = x == 0 ? 0 : x - 1;
    const std::size_t h = x + 1 == w ? x : x + 1;
    float lo[3], mid[3], hi[3];
    const std::size_t cols[3] = {l, x, h};
    for (int k = 0; k < 3; ++k) {
      const float p = a[cols[k]], q = r[cols[k]], s = b[cols[k]];
      lo[k] = std::min(std::min(p, q), s);
      hi[k] = std::max(std::max(p, q), s);
      mid[k] = med3(p, q, s);
    }
    const float max_lo = std::max(std::max(lo[0], lo[1]), lo[2]);
    const float min_hi = std::min(std::min(hi[0], hi[1]), hi[2]);
    out[x] = med3(max_lo, med3(mid[0], mid[1], mid[2]), min_hi);
  }
}

void convolve_row(const float* padded, const float* wts, std::size_t radius, float* out,
                  std::size_t width) {
  const std::size_t taps = 2 * radius + 1;
  for (std::size_t x = 0; x < width; ++x) {
    float s = 0.0f;
    for (std::size_t k = 0; k < taps; ++k) s = s + wts[k] * padded[x + k];
    out[x] = s;
  }
}

double min_sq_distance(double x, double y, double z, const double* xs, const double* ys,
                       const double* zs, std::size_t n) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - x, dy = ys[i] - y, dz = zs[i] - z;
    best = std::min(best, dx * dx + dy * dy + dz * dz);
  }
  return best;
}

double sq_distance(const float* a, const float* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = double(a[i]) - double(b[i]);
    s += d * d;
  }
  return s;
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{"scalar",    step,        invert,          multiply,    maximum,
                         accumulate,  sobel_row,   median3_row,     convolve_row,
                         min_sq_distance, sq_distance};
  return k;
}

}  // namespace treesketch::simd
