#include "treesketch/nn_baseline.hpp"

#include <cmath>
#include <limits>

#include "treesketch/errors.hpp"
#include "treesketch/param_io.hpp"
#include "treesketch/simd/kernels.hpp"
#include "treesketch/sketch.hpp"

namespace treesketch {

std::vector<float> featurize(const RasterImage& sketch, int side) {
  if (sketch.width() < side) throw ValidationError("sketch smaller than the feature side");
  const RasterImage small = resize_for_input(sketch, side);
  return {small.data().begin(), small.data().end()};
}

void SketchIndex::add(const RasterImage& sketch, TreeParams params, std::string label) {
  add_feature(featurize(sketch, side_), std::move(params), std::move(label));
}

void SketchIndex::add_feature(std::vector<float> feature, TreeParams params, std::string label) {
  if (feature.size() != std::size_t(side_) * side_) throw ValidationError("feature length mismatch");
  entries_.push_back({std::move(label), std::move(feature), std::move(params)});
}

SketchIndex::Match SketchIndex::nearest(const std::vector<float>& feature) const {
  if (entries_.empty()) throw ValidationError("empty sketch index");
  if (feature.size() != std::size_t(side_) * side_) throw ValidationError("feature length mismatch");
  const auto& k = simd::active();
  Match best{0, std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const double d = k.sq_distance(feature.data(), entries_[i].feature.data(), feature.size());
    if (d < best.distance) best = {i, d};
  }
  best.distance = std::sqrt(best.distance);
  return best;
}

const TreeParams& SketchIndex::predict(const RasterImage& sketch) const {
  return entries_[nearest(featurize(sketch, side_)).entry].params;
}

void SketchIndex::save(const std::filesystem::path& path) const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& e : entries_)
    rows.push_back({{"label", e.label}, {"feature", e.feature}, {"params", params_to_json(e.params)}});
  write_text(path, nlohmann::json{{"version", 1}, {"feature_side", side_}, {"entries", rows}}.dump() + "\n");
}

SketchIndex SketchIndex::load(const std::filesystem::path& path) {
  const auto j = read_json(path);
  try {
    SketchIndex idx(j.at("feature_side").get<int>());
    for (const auto& e : j.at("entries"))
      idx.add_feature(e.at("feature").get<std::vector<float>>(), params_from_json(e.at("params")),
                      e.value("label", std::string{}));
    return idx;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed sketch index: ") + e.what());
  }
}

}  // namespace treesketch
