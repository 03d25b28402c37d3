#include "treesketch/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "treesketch/errors.hpp"

namespace treesketch {

RasterImage::RasterImage(int width, int height, float fill) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw ValidationError("negative image size");
  data_.assign(std::size_t(width) * std::size_t(height), fill);
}

bool RasterImage::binary() const {
  return std::all_of(data_.begin(), data_.end(), [](float v) { return v == 0.0f || v == 1.0f; });
}

std::size_t RasterImage::dark_count() const {
  return static_cast<std::size_t>(std::count_if(data_.begin(), data_.end(), [](float v) { return v < 0.5f; }));
}

double RasterImage::mean() const {
  if (data_.empty()) return 0.0;
  double s = 0.0;
  for (float v : data_) s += v;
  return s / double(data_.size());
}

RasterImage flip_horizontal(const RasterImage& img) {
  RasterImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    const float* src = img.row(y);
    std::reverse_copy(src, src + img.width(), out.row(y));
  }
  return out;
}

namespace {

std::vector<png_byte> quantize(const RasterImage& img) {
  std::vector<png_byte> bytes(img.size());
  const auto px = img.data();
  for (std::size_t i = 0; i < bytes.size(); ++i)
    bytes[i] = static_cast<png_byte>(std::lround(std::clamp(px[i], 0.0f, 1.0f) * 255.0f));
  return bytes;
}

png_image gray_header(const RasterImage& img) {
  png_image header{};
  header.version = PNG_IMAGE_VERSION;
  header.width = static_cast<png_uint_32>(img.width());
  header.height = static_cast<png_uint_32>(img.height());
  header.format = PNG_FORMAT_GRAY;
  return header;
}

}  // namespace

std::vector<unsigned char> encode_png(const RasterImage& img) {
  if (img.empty()) throw ValidationError("cannot encode an empty image");
  const auto bytes = quantize(img);
  png_image header = gray_header(img);
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&header, nullptr, &size, 0, bytes.data(), 0, nullptr))
    throw IoError(std::string("png encode failed: ") + header.message);
  std::vector<unsigned char> out(size);
  if (!png_image_write_to_memory(&header, out.data(), &size, 0, bytes.data(), 0, nullptr))
    throw IoError(std::string("png encode failed: ") + header.message);
  out.resize(size);
  return out;
}

void write_png(const RasterImage& img, const std::filesystem::path& path) {
  const auto encoded = encode_png(img);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(encoded.data()), static_cast<std::streamsize>(encoded.size()));
  if (!f) throw IoError("cannot write " + path.string());
}

RasterImage read_png(const std::filesystem::path& path) {
  png_image header{};
  header.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&header, path.string().c_str()))
    throw IoError("cannot read " + path.string() + ": " + header.message);
  header.format = PNG_FORMAT_GRAY;
  std::vector<png_byte> bytes(PNG_IMAGE_SIZE(header));
  if (!png_image_finish_read(&header, nullptr, bytes.data(), 0, nullptr))
    throw IoError("cannot decode " + path.string() + ": " + header.message);
  RasterImage img(static_cast<int>(header.width), static_cast<int>(header.height));
  auto px = img.data();
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = bytes[i] / 255.0f;
  return img;
}

}  // namespace treesketch
