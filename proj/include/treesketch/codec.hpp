#pragma once

// Network target representation of a parameter dictionary: a 4 x 62 float
// matrix, its split into six magnitude-group sub-matrices, and max-abs scaling.

#include <array>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "treesketch/params.hpp"

namespace treesketch {

inline constexpr std::size_t kTargetRows = kLevelCount;

// Row-major 4 x n block with named columns.
struct KeyedMatrix {
  std::vector<std::string> keys;
  std::vector<double> data;

  KeyedMatrix() = default;
  explicit KeyedMatrix(std::vector<std::string> column_keys)
      : keys(std::move(column_keys)), data(kTargetRows * keys.size(), 0.0) {}

  std::size_t cols() const { return keys.size(); }
  double at(std::size_t row, std::size_t col) const { return data[row * cols() + col]; }
  double& at(std::size_t row, std::size_t col) { return data[row * cols() + col]; }

  friend bool operator==(const KeyedMatrix&, const KeyedMatrix&) = default;
};

using TargetMatrix = KeyedMatrix;

struct TargetBundle {
  std::array<KeyedMatrix, kAllGroups.size()> groups;

  KeyedMatrix& group(MagnitudeGroup g) { return groups[group_index(g)]; }
  const KeyedMatrix& group(MagnitudeGroup g) const { return groups[group_index(g)]; }
  std::size_t total_cols() const;

  friend bool operator==(const TargetBundle&, const TargetBundle&) = default;
};

TargetMatrix encode(const TreeParams& params, const ParamRegistry& registry = ParamRegistry::standard());
TargetBundle split_groups(const TargetMatrix& m, const ParamRegistry& registry = ParamRegistry::standard());
TargetMatrix merge(const TargetBundle& b, const ParamRegistry& registry = ParamRegistry::standard());

// Scalars come from row 0. Discrete columns snap by round-half-away-from-zero
// and clamp; continuous columns clamp to their range.
TreeParams decode(const TargetBundle& denormalized, const ParamRegistry& registry = ParamRegistry::standard());

struct NormalizationRecord {
  int version = 1;
  bool include_nonnegative = false;
  std::map<std::string, double, std::less<>> max_abs;

  friend bool operator==(const NormalizationRecord&, const NormalizationRecord&) = default;
};

bool is_normalized_group(MagnitudeGroup g, bool include_nonnegative);

// Column-wise max-abs over every row of every bundle. A column that is zero
// everywhere stores 1 so the record stays usable.
NormalizationRecord build_record(std::span<const TargetBundle> training, bool include_nonnegative = false,
                                 const ParamRegistry& registry = ParamRegistry::standard());

TargetBundle normalize(const TargetBundle& b, const NormalizationRecord& record);
TargetBundle denormalize(const TargetBundle& b, const NormalizationRecord& record);

nlohmann::json bundle_to_json(const TargetBundle& b);
TargetBundle bundle_from_json(const nlohmann::json& j);
nlohmann::json record_to_json(const NormalizationRecord& r);
NormalizationRecord record_from_json(const nlohmann::json& j);

void save_bundle(const TargetBundle& b, const std::filesystem::path& path);
TargetBundle load_bundle(const std::filesystem::path& path);
void save_record(const NormalizationRecord& r, const std::filesystem::path& path);
NormalizationRecord load_record(const std::filesystem::path& path);

}  // namespace treesketch
