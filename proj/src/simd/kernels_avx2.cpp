#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "treesketch/simd/kernels.hpp"

namespace treesketch::simd {
namespace {

constexpr std::size_t kLanes = 8;

void step(const float* in, float* out, std::size_t n, float t, float below, float above) {
  const __m256 vt = _mm256_set1_ps(t), vb = _mm256_set1_ps(below), va = _mm256_set1_ps(above);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256 lt = _mm256_cmp_ps(_mm256_loadu_ps(in + i), vt, _CMP_LT_OQ);
    _mm256_storeu_ps(out + i, _mm256_blendv_ps(va, vb, lt));
  }
  for (; i < n; ++i) out[i] = in[i] < t ? below : above;
}

void invert(const float* in, float* out, std::size_t n) {
  const __m256 one = _mm256_set1_ps(1.0f);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) _mm256_storeu_ps(out + i, _mm256_sub_ps(one, _mm256_loadu_ps(in + i)));
  for (; i < n; ++i) out[i] = 1.0f - in[i];
}

void multiply(const float* a, const float* b, float* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes)
    _mm256_storeu_ps(out + i, _mm256_mul_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

// std::max(a, b) returns a unless a < b; _mm256_max_ps(b, a) returns a unless b > a.
void maximum(const float* a, const float* b, float* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes)
    _mm256_storeu_ps(out + i, _mm256_max_ps(_mm256_loadu_ps(b + i), _mm256_loadu_ps(a + i)));
  for (; i < n; ++i) out[i] = std::max(a[i], b[i]);
}

void accumulate(const float* row, float w, float* acc, std::size_t n) {
  const __m256 vw = _mm256_set1_ps(w);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256 p = _mm256_mul_ps(vw, _mm256_loadu_ps(row + i));
    _mm256_storeu_ps(acc + i, _mm256_add_ps(_mm256_loadu_ps(acc + i), p));
  }
  for (; i < n; ++i) acc[i] = acc[i] + w * row[i];
}

inline float sobel_at(const float* a, const float* r, const float* b, std::size_t x, std::size_t w) {
  const std::size_t l = x == 0 ? 0 : x - 1;
  const std::size_t h = x + 1 == w ? x : x + 1;
  const float gx = (a[h] - a[l]) + 2.0f * (r[h] - r[l]) + (b[h] - b[l]);
  const float gy = (b[l] - a[l]) + 2.0f * (b[x] - a[x]) + (b[h] - a[h]);
  return std::min(1.0f, std::sqrt(gx * gx + gy * gy));
}

void sobel_row(const float* a, const float* r, const float* b, float* out, std::size_t w) {
  if (w < kLanes + 2) {
    for (std::size_t x = 0; x < w; ++x) out[x] = sobel_at(a, r, b, x, w);
    return;
  }
  out[0] = sobel_at(a, r, b, 0, w);
  const __m256 two = _mm256_set1_ps(2.0f), one = _mm256_set1_ps(1.0f);
  std::size_t x = 1;
  for (; x + kLanes <= w - 1; x += kLanes) {
    const __m256 al = _mm256_loadu_ps(a + x - 1), ac = _mm256_loadu_ps(a + x), ah = _mm256_loadu_ps(a + x + 1);
    const __m256 rl = _mm256_loadu_ps(r + x - 1), rh = _mm256_loadu_ps(r + x + 1);
    const __m256 bl = _mm256_loadu_ps(b + x - 1), bc = _mm256_loadu_ps(b + x), bh = _mm256_loadu_ps(b + x + 1);
    const __m256 gx = _mm256_add_ps(
        _mm256_add_ps(_mm256_sub_ps(ah, al), _mm256_mul_ps(two, _mm256_sub_ps(rh, rl))),
        _mm256_sub_ps(bh, bl));
    const __m256 gy = _mm256_add_ps(
        _mm256_add_ps(_mm256_sub_ps(bl, al), _mm256_mul_ps(two, _mm256_sub_ps(bc, ac))),
        _mm256_sub_ps(bh, ah));
    const __m256 mag = _mm256_sqrt_ps(_mm256_add_ps(_mm256_mul_ps(gx, gx), _mm256_mul_ps(gy, gy)));
    // std::min(1, m) is m < 1 ? m : 1
    _mm256_storeu_ps(out + x, _mm256_min_ps(mag, one));
  }
  for (; x < w; ++x) out[x] = sobel_at(a, r, b, x, w);
}

inline float med3(float a, float b, float c) {
  return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

inline float median_at(const float* a, const float* r, const float* b, std::size_t x, std::size_t w) {
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
  return med3(max_lo, med3(mid[0], mid[1], mid[2]), min_hi);
}

// Median filtering only selects among inputs, so min/max tie-breaking
// cannot change the result.
inline __m256 vmed3(__m256 a, __m256 b, __m256 c) {
  return _mm256_max_ps(_mm256_min_ps(a, b), _mm256_min_ps(_mm256_max_ps(a, b), c));
}

void median3_row(const float* a, const float* r, const float* b, float* out, std::size_t w) {
  if (w < kLanes + 2) {
    for (std::size_t x = 0; x < w; ++x) out[x] = median_at(a, r, b, x, w);
    return;
  }
  out[0] = median_at(a, r, b, 0, w);
  std::size_t x = 1;
  for (; x + kLanes <= w - 1; x += kLanes) {
    __m256 lo[3], mid[3], hi[3];
    for (int k = 0; k < 3; ++k) {
      const std::size_t c = x - 1 + static_cast<std::size_t>(k);
      const __m256 p = _mm256_loadu_ps(a + c), q = _mm256_loadu_ps(r + c), s = _mm256_loadu_ps(b + c);
      lo[k] = _mm256_min_ps(_mm256_min_ps(p, q), s);
      hi[k] = _mm256_max_ps(_mm256_max_ps(p, q), s);
      mid[k] = vmed3(p, q, s);
    }
    const __m256 max_lo = _mm256_max_ps(_mm256_max_ps(lo[0], lo[1]), lo[2]);
    const __m256 min_hi = _mm256_min_ps(_mm256_min_ps(hi[0], hi[1]), hi[2]);
    _mm256_storeu_ps(out + x, vmed3(max_lo, vmed3(mid[0], mid[1], mid[2]), min_hi));
  }
  for (; x < w; ++x) out[x] = median_at(a, r, b, x, w);
}

void convolve_row(const float* padded, const float* wts, std::size_t radius, float* out,
                  std::size_t width) {
  const std::size_t taps = 2 * radius + 1;
  std::size_t x = 0;
  for (; x + kLanes <= width; x += kLanes) {
    __m256 s = _mm256_setzero_ps();
    for (std::size_t k = 0; k < taps; ++k)
      s = _mm256_add_ps(s, _mm256_mul_ps(_mm256_set1_ps(wts[k]), _mm256_loadu_ps(padded + x + k)));
    _mm256_storeu_ps(out + x, s);
  }
  for (; x < width; ++x) {
    float s = 0.0f;
    for (std::size_t k = 0; k < taps; ++k) s = s + wts[k] * padded[x + k];
    out[x] = s;
  }
}

double min_sq_distance(double x, double y, double z, const double* xs, const double* ys,
                       const double* zs, std::size_t n) {
  const __m256d vx = _mm256_set1_pd(x), vy = _mm256_set1_pd(y), vz = _mm256_set1_pd(z);
  __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), vx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), vy);
    const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(zs + i), vz);
    const __m256d d2 = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)),
                                     _mm256_mul_pd(dz, dz));
    best = _mm256_min_pd(best, d2);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, best);
  double m = std::min(std::min(lanes[0], lanes[1]), std::min(lanes[2], lanes[3]));
  for (; i < n; ++i) {
    const double dx = xs[i] - x, dy = ys[i] - y, dz = zs[i] - z;
    m = std::min(m, dx * dx + dy * dy + dz * dz);
  }
  return m;
}

double sq_distance(const float* a, const float* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256 va = _mm256_loadu_ps(a + i), vb = _mm256_loadu_ps(b + i);
    const __m256d lo = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_castps256_ps128(va)),
                                     _mm256_cvtps_pd(_mm256_castps256_ps128(vb)));
    const __m256d hi = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_extractf128_ps(va, 1)),
                                     _mm256_cvtps_pd(_mm256_extractf128_ps(vb, 1)));
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(lo, lo));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(hi, hi));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) {
    const double d = double(a[i]) - double(b[i]);
    s += d * d;
  }
  return s;
}

}  // namespace

const Kernels* avx2_kernels() {
  static const Kernels k{"avx2",      step,        invert,          multiply,    maximum,
                         accumulate,  sobel_row,   median3_row,     convolve_row,
                         min_sq_distance, sq_distance};
  return &k;
}

}  // namespace treesketch::simd
