#pragma once

// Nearest-neighbour sketch -> parameters predictor over downsampled pixels.

#include <filesystem>
#include <string>
#include <vector>

#include "treesketch/image.hpp"
#include "treesketch/params.hpp"

namespace treesketch {

inline constexpr int kFeatureSide = 16;

// resize_for_input to side x side, flattened row-major.
std::vector<float> featurize(const RasterImage& sketch, int side = kFeatureSide);

struct IndexEntry {
  std::string label;
  std::vector<float> feature;
  TreeParams params;
};

class SketchIndex {
 public:
  explicit SketchIndex(int feature_side = kFeatureSide) : side_(feature_side) {}

  int feature_side() const { return side_; }
  const std::vector<IndexEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  void add(const RasterImage& sketch, TreeParams params, std::string label = {});
  void add_feature(std::vector<float> feature, TreeParams params, std::string label = {});

  struct Match {
    std::size_t entry = 0;
    double distance = 0.0;
  };
  // Smallest Euclidean distance; the lowest index wins ties.
  Match nearest(const std::vector<float>& feature) const;
  const TreeParams& predict(const RasterImage& sketch) const;

  void save(const std::filesystem::path& path) const;
  static SketchIndex load(const std::filesystem::path& path);

 private:
  int side_;
  std::vector<IndexEntry> entries_;
};

}  // namespace treesketch
