#include "treesketch/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "treesketch/errors.hpp"
#include "treesketch/simd/kernels.hpp"

namespace treesketch {

namespace {

RasterImage like(const RasterImage& img) { return RasterImage(img.width(), img.height()); }

int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

// Runs a three-row kernel over every row with edge-clamped neighbours.
template <typename RowFn>
RasterImage rows3(const RasterImage& img, RowFn fn) {
  RasterImage out = like(img);
  const int h = img.height();
  for (int y = 0; y < h; ++y)
    fn(img.row(clamp_index(y - 1, h)), img.row(y), img.row(clamp_index(y + 1, h)), out.row(y),
       std::size_t(img.width()));
  return out;
}

}  // namespace

RasterImage color_ramp(const RasterImage& img, float threshold) {
  if (!(threshold > 0.0f && threshold < 1.0f)) throw ValidationError("ramp threshold must be in (0, 1)");
  RasterImage out = like(img);
  simd::active().step(img.data().data(), out.data().data(), img.size(), threshold, 0.0f, 1.0f);
  return out;
}

RasterImage invert(const RasterImage& img) {
  RasterImage out = like(img);
  simd::active().invert(img.data().data(), out.data().data(), img.size());
  return out;
}

RasterImage remove_background(const RasterImage& img, float threshold) {
  RasterImage out = like(img);
  simd::active().step(img.data().data(), out.data().data(), img.size(), threshold, 1.0f, 0.0f);
  return out;
}

RasterImage sobel(const RasterImage& img) {
  if (img.width() < 3 || img.height() < 3) throw ValidationError("sobel needs at least 3x3 pixels");
  return rows3(img, simd::active().sobel_row);
}

RasterImage denoise(const RasterImage& img) {
  if (img.empty()) return img;
  return rows3(img, simd::active().median3_row);
}

RasterImage erode(const RasterImage& img, int radius) {
  if (!img.binary()) throw ValidationError("erode requires binary image");
  if (radius < 0) throw ValidationError("erode radius must be non-negative");
  if (radius == 0 || img.empty()) return img;
  // A pixel stays dark only if its whole window is dark, i.e. the window max is 0.
  const auto& k = simd::active();
  const int w = img.width(), h = img.height();
  RasterImage horiz = like(img);
  std::vector<float> padded(std::size_t(w + 2 * radius));
  for (int y = 0; y < h; ++y) {
    const float* src = img.row(y);
    for (int i = 0; i < w + 2 * radius; ++i) padded[i] = src[clamp_index(i - radius, w)];
    float* dst = horiz.row(y);
    std::copy(padded.begin(), padded.begin() + w, dst);
    for (int s = 1; s <= 2 * radius; ++s) k.max(dst, padded.data() + s, dst, std::size_t(w));
  }
  RasterImage out = like(img);
  for (int y = 0; y < h; ++y) {
    float* dst = out.row(y);
    std::copy(horiz.row(clamp_index(y - radius, h)), horiz.row(clamp_index(y - radius, h)) + w, dst);
    for (int s = -radius + 1; s <= radius; ++s)
      k.max(dst, horiz.row(clamp_index(y + s, h)), dst, std::size_t(w));
  }
  return out;
}

RasterImage gaussian(const RasterImage& img, double sigma) {
  if (!(sigma > 0.0)) throw ValidationError("gaussian sigma must be positive");
  if (img.empty()) return img;
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> wd(std::size_t(2 * radius + 1));
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    wd[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
    total += wd[i + radius];
  }
  std::vector<float> weights(wd.size());
  for (std::size_t i = 0; i < wd.size(); ++i) weights[i] = static_cast<float>(wd[i] / total);

  const auto& k = simd::active();
  const int w = img.width(), h = img.height();
  RasterImage horiz = like(img);
  std::vector<float> padded(std::size_t(w + 2 * radius));
  for (int y = 0; y < h; ++y) {
    const float* src = img.row(y);
    for (int i = 0; i < w + 2 * radius; ++i) padded[i] = src[clamp_index(i - radius, w)];
    k.convolve_row(padded.data(), weights.data(), std::size_t(radius), horiz.row(y), std::size_t(w));
  }
  RasterImage out(w, h, 0.0f);
  for (int y = 0; y < h; ++y) {
    float* acc = out.row(y);
    for (int t = -radius; t <= radius; ++t)
      k.accumulate(horiz.row(clamp_index(y + t, h)), weights[t + radius], acc, std::size_t(w));
    for (int x = 0; x < w; ++x) acc[x] = std::clamp(acc[x], 0.0f, 1.0f);
  }
  return out;
}

RasterImage multiply_mix(const RasterImage& a, const RasterImage& b) {
  if (!a.same_size(b)) throw ValidationError("multiply_mix: image sizes differ");
  RasterImage out = like(a);
  simd::active().multiply(a.data().data(), b.data().data(), out.data().data(), a.size());
  return out;
}

namespace {

struct Tap {
  int src;
  double w;
};

// Overlap weights of source pixels for each destination pixel along one axis.
std::vector<std::vector<Tap>> area_taps(int from, int to) {
  std::vector<std::vector<Tap>> taps(static_cast<std::size_t>(to));
  const double scale = double(from) / to;
  for (int d = 0; d < to; ++d) {
    const double lo = d * scale, hi = (d + 1) * scale;
    for (int s = static_cast<int>(std::floor(lo)); s < std::min(from, static_cast<int>(std::ceil(hi))); ++s) {
      const double overlap = std::min(hi, s + 1.0) - std::max(lo, double(s));
      if (overlap > 0) taps[d].push_back({s, overlap / scale});
    }
  }
  return taps;
}

}  // namespace

RasterImage resize_for_input(const RasterImage& img, int side, Upscale policy) {
  if (img.width() != img.height()) throw ValidationError("resize_for_input needs a square image");
  if (side < 1) throw ValidationError("target side must be positive");
  if (side == img.width()) return img;
  if (side > img.width()) {
    if (policy == Upscale::PassThrough) return img;
    throw ValidationError("resize_for_input does not upscale");
  }
  const auto taps = area_taps(img.width(), side);
  RasterImage out(side, side, 0.0f);
  std::vector<double> rowbuf(static_cast<std::size_t>(side));
  for (int oy = 0; oy < side; ++oy) {
    std::fill(rowbuf.begin(), rowbuf.end(), 0.0);
    for (const Tap& ty : taps[oy]) {
      const float* src = img.row(ty.src);
      for (int ox = 0; ox < side; ++ox) {
        double s = 0.0;
        for (const Tap& tx : taps[ox]) s += tx.w * src[tx.src];
        rowbuf[ox] += ty.w * s;
      }
    }
    for (int ox = 0; ox < side; ++ox) out.at(ox, oy) = static_cast<float>(std::clamp(rowbuf[ox], 0.0, 1.0));
  }
  return out;
}

RasterImage skeleton_chain(const RasterImage& raw, const SketchConfig& cfg) {
  RasterImage img = remove_background(raw, cfg.skeleton_threshold);
  img = denoise(img);
  img = sobel(img);
  img = color_ramp(img, cfg.skeleton_ramp);
  // Strokes are white here; shrinking the dark surround before the inversion
  // keeps two-pixel outlines alive and grows them by the radius.
  img = erode(img, cfg.erode_radius);
  return invert(img);
}

RasterImage foliage_chain(const RasterImage& raw, const SketchConfig& cfg) {
  RasterImage img = remove_background(raw, cfg.foliage_threshold);
  img = gaussian(img, cfg.sigma_for(raw.width()));
  img = color_ramp(img, cfg.foliage_ramp);
  img = sobel(img);
  return invert(img);
}

RasterImage sketch_tree(const Mesh& skeleton, const Mesh& foliage, const CameraView& camera,
                        int resolution, const SketchConfig& cfg) {
  const RasterImage sk = skeleton_chain(render_part(skeleton, camera, resolution, cfg.thinning), cfg);
  if (foliage.empty()) return sk;
  const RasterImage fo = foliage_chain(render_part(foliage, camera, resolution, cfg.thinning), cfg);
  return multiply_mix(sk, fo);
}

}  // namespace treesketch
