#pragma once

#include "treesketch/image.hpp"
#include "treesketch/mesh.hpp"
#include "treesketch/raster.hpp"

namespace treesketch {

// out = 0 where in < threshold, 1 elsewhere. threshold in (0, 1).
RasterImage color_ramp(const RasterImage& img, float threshold);
RasterImage invert(const RasterImage& img);
// Foreground matte of a black-on-white render: 1 where in < threshold, else 0.
RasterImage remove_background(const RasterImage& img, float threshold);
// Clamped gradient magnitude of the 3x3 Sobel kernels, edge clamped. Needs >= 3x3.
RasterImage sobel(const RasterImage& img);
// Erosion of the dark set (samples == 0) with a (2r+1)^2 square; input must be binary.
RasterImage erode(const RasterImage& img, int radius);
// Separable Gaussian, truncated at 3 sigma, edge clamped.
RasterImage gaussian(const RasterImage& img, double sigma);
// 3x3 median, edge clamped.
RasterImage denoise(const RasterImage& img);
// Pixelwise product; throws on size mismatch.
RasterImage multiply_mix(const RasterImage& a, const RasterImage& b);

enum class Upscale { Reject, PassThrough };
// Area-weighted downsampling of a square image to side x side.
RasterImage resize_for_input(const RasterImage& img, int side = 224, Upscale policy = Upscale::Reject);

struct SketchConfig {
  double thinning = kDefaultThinning;
  double sigma_at_608 = 6.0;
  float skeleton_threshold = 0.5f;
  float skeleton_ramp = 0.9f;
  int erode_radius = 1;
  float foliage_threshold = 0.9f;
  float foliage_ramp = 0.01f;

  double sigma_for(int resolution) const { return sigma_at_608 * resolution / 608.0; }
};

RasterImage skeleton_chain(const RasterImage& raw, const SketchConfig& cfg = {});
RasterImage foliage_chain(const RasterImage& raw, const SketchConfig& cfg = {});

// Render both parts from one camera, run both chains and mix.
RasterImage sketch_tree(const Mesh& skeleton, const Mesh& foliage, const CameraView& camera,
                        int resolution, const SketchConfig& cfg = {});

}  // namespace treesketch
