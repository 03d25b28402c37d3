#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace treesketch {

// Single-channel float image, row-major, samples in [0, 1]. 1 is white.
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, float fill = 1.0f);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  float at(int x, int y) const { return data_[index(x, y)]; }
  float& at(int x, int y) { return data_[index(x, y)]; }
  const float* row(int y) const { return data_.data() + std::size_t(y) * width_; }
  float* row(int y) { return data_.data() + std::size_t(y) * width_; }
  std::span<const float> data() const { return data_; }
  std::span<float> data() { return data_; }

  bool same_size(const RasterImage& o) const { return width_ == o.width_ && height_ == o.height_; }
  bool binary() const;
  std::size_t dark_count() const;  // samples < 0.5
  double mean() const;

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  std::size_t index(int x, int y) const { return std::size_t(y) * width_ + std::size_t(x); }

  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

RasterImage flip_horizontal(const RasterImage& img);

// 8-bit grayscale PNG without alpha; samples are quantized as round(255 v).
void write_png(const RasterImage& img, const std::filesystem::path& path);
RasterImage read_png(const std::filesystem::path& path);
std::vector<unsigned char> encode_png(const RasterImage& img);

}  // namespace treesketch
