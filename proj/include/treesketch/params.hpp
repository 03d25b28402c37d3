#pragma once

// Parameter vocabulary for the Weber-Penn style tree generator: the ordered
// registry of all 62 parameters, the dictionary type holding one tree's values,
// and validation against the registry.

#include <array>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace treesketch {

inline constexpr std::size_t kLevelCount = 4;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ValueKind { Float, Int, Bool, Enum, BinarySign };
enum class Arity { Scalar, PerLevel };

// Order-of-magnitude groups; each one becomes a separate target sub-matrix.
enum class MagnitudeGroup {
  Unbounded,    // [-inf, inf]
  Angle,        // [-360, 360]
  UnitInterval, // [0, 1]
  NonNegative,  // [0, inf]
  Bounded,      // [min, max]
  SignedUnit,   // [-1, 1]
};

inline constexpr std::array<MagnitudeGroup, 6> kAllGroups = {
    MagnitudeGroup::Unbounded,   MagnitudeGroup::Angle,   MagnitudeGroup::UnitInterval,
    MagnitudeGroup::NonNegative, MagnitudeGroup::Bounded, MagnitudeGroup::SignedUnit};

std::string_view group_name(MagnitudeGroup g);
MagnitudeGroup parse_group(std::string_view name);
std::size_t group_index(MagnitudeGroup g);

struct Range {
  double min = -kInf;
  double max = kInf;

  bool contains(double v) const { return v >= min && v <= max; }
  bool bounded() const { return min > -kInf && max < kInf; }
};

struct ParamSpec {
  std::string name;
  ValueKind kind = ValueKind::Float;
  Arity arity = Arity::Scalar;
  MagnitudeGroup group = MagnitudeGroup::Unbounded;
  Range range;
  std::vector<std::string> labels;  // Enum only, in declaration order.

  bool per_level() const { return arity == Arity::PerLevel; }
  bool discrete() const { return kind != ValueKind::Float; }
};

// Fixed, versioned list of parameters. Order is the target-matrix column order.
class ParamRegistry {
 public:
  static constexpr int kVersion = 1;

  static const ParamRegistry& standard();

  explicit ParamRegistry(std::vector<ParamSpec> entries);

  std::span<const ParamSpec> entries() const { return entries_; }
  std::size_t total_count() const { return entries_.size(); }
  const ParamSpec* find(std::string_view name) const;
  const ParamSpec& at(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;
  std::size_t group_count(MagnitudeGroup g) const;

 private:
  std::vector<ParamSpec> entries_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// Scalars (float/int/bool/sign) are stored as double, per-level values as a
// vector (length 4 when valid), enum values as their label.
using ParamValue = std::variant<double, std::vector<double>, std::string>;

class TreeParams {
 public:
  using Map = std::map<std::string, ParamValue, std::less<>>;

  bool has(std::string_view name) const { return values_.find(name) != values_.end(); }
  const ParamValue& get(std::string_view name) const;
  void set(std::string name, ParamValue value) { values_.insert_or_assign(std::move(name), std::move(value)); }
  void erase(std::string_view name);

  double scalar(std::string_view name) const;
  double level(std::string_view name, std::size_t lvl) const;
  std::array<double, kLevelCount> levels(std::string_view name) const;
  const std::string& label(std::string_view name) const;
  bool flag(std::string_view name) const { return scalar(name) != 0.0; }
  int integer(std::string_view name) const;

  const Map& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  friend bool operator==(const TreeParams&, const TreeParams&) = default;

 private:
  Map values_;
};

struct Violation {
  std::string parameter;
  std::string rule;
  std::string value;
};

std::vector<Violation> validate(const TreeParams& params,
                                const ParamRegistry& registry = ParamRegistry::standard());

std::string describe(const Violation& v);

// Label encoding: zero-based declaration index as float.
double encode_enum(std::string_view name, std::string_view label,
                   const ParamRegistry& registry = ParamRegistry::standard());
const std::string& decode_enum(std::string_view name, double code,
                               const ParamRegistry& registry = ParamRegistry::standard());

// Numeric view of one entry (enum -> code, bool -> 0/1, sign -> +-1).
double numeric_value(const TreeParams& params, const ParamSpec& spec, std::size_t lvl = 0);

// Parameter names, kept in one place so generator code and data files agree.
namespace pn {
inline constexpr std::string_view kBevelResolution = "Bevel Resolution";
inline constexpr std::string_view kHandleType = "Handle Type";
inline constexpr std::string_view kShape = "Shape";
inline constexpr std::string_view kCustomShape = "Custom Shape";
inline constexpr std::string_view kSecondarySplits = "Secondary Splits";
inline constexpr std::string_view kBranchDistribution = "Branch Distribution";
inline constexpr std::string_view kBranchWhorls = "Number of Branch Whorls";
inline constexpr std::string_view kRandomSeed = "Random Seed";
inline constexpr std::string_view kScale = "Scale";
inline constexpr std::string_view kScaleVariation = "Scale Variation";
inline constexpr std::string_view kRatio = "Ratio";
inline constexpr std::string_view kRadiusScale = "Radius Scale";
inline constexpr std::string_view kRadiusScaleVariation = "Radius Scale Variation";
inline constexpr std::string_view kBranchRadiusRatio = "Branch Radius Ratio";
inline constexpr std::string_view kMinimumRadius = "Minimum Radius";
inline constexpr std::string_view kCloseTip = "Close Tip";
inline constexpr std::string_view kRootFlare = "Root Flare";
inline constexpr std::string_view kTaper = "Taper";
inline constexpr std::string_view kTweakRadius = "Tweak Radius";
inline constexpr std::string_view kLevels = "Levels";
inline constexpr std::string_view kTreeForks = "Tree Forks Number";
inline constexpr std::string_view kTrunkHeight = "Trunk Height";
inline constexpr std::string_view kSecondaryBaseSize = "Secondary Base Size";
inline constexpr std::string_view kSplitHeight = "Split Height";
inline constexpr std::string_view kSplitBias = "Split Bias";
inline constexpr std::string_view kBranches = "Branches";
inline constexpr std::string_view kSegmentSplits = "Segment Splits";
inline constexpr std::string_view kSiblingAngle = "Sibling Angle";
inline constexpr std::string_view kSiblingAngleVariance = "Sibling Angle Variance";
inline constexpr std::string_view kBranchRollAngle = "Branch Roll Angle";
inline constexpr std::string_view kBranchRollAngleVariance = "Branch Roll Angle Variance";
inline constexpr std::string_view kParentBranchRollAngle = "Parent Branch Roll Angle";
inline constexpr std::string_view kBranchRotate = "Branch Rotate";
inline constexpr std::string_view kOutwardAttraction = "Outward Attraction";
inline constexpr std::string_view kBranchingMode = "Branching Mode";
inline constexpr std::string_view kCurveResolution = "Curve Resolution";
inline constexpr std::string_view kSign = "Sign";
inline constexpr std::string_view kTaperCrown = "Taper Crown";
inline constexpr std::string_view kLength = "Length";
inline constexpr std::string_view kLengthVariation = "Length Variation";
inline constexpr std::string_view kParentBranchAngle = "Parent Branch Angle";
inline constexpr std::string_view kParentBranchAngleVariance = "Parent Branch Angle Variance";
inline constexpr std::string_view kCurvature = "First Half Internodes Branching Angle";
inline constexpr std::string_view kCurvatureVariance = "Internode Branching Angle Variance";
inline constexpr std::string_view kBackCurvature = "Second Half Internodes Branching Angle";
inline constexpr std::string_view kVerticalAttraction = "Vertical Attraction";
inline constexpr std::string_view kUseOldDownAngleVariation = "Use Old Down Angle Variation";
inline constexpr std::string_view kUseParentAngle = "Use Parent Angle";
inline constexpr std::string_view kShowLeaves = "Show Leaves";
inline constexpr std::string_view kLeafShape = "Leaf Shape";
inline constexpr std::string_view kLeaves = "Leaves";
inline constexpr std::string_view kLeafDistribution = "Leaf Distribution";
inline constexpr std::string_view kLeafDownAngle = "Leaf Down Angle";
inline constexpr std::string_view kLeafDownAngleVariation = "Leaf Down Angle Variation";
inline constexpr std::string_view kLeafRollAngle = "Leaf Roll Angle";
inline constexpr std::string_view kLeafAngleVariance = "Leaf Angle Variance";
inline constexpr std::string_view kLeafScale = "Leaf Scaling Factor";
inline constexpr std::string_view kLeafScaleVariance = "Leaf Scaling Factor Variance";
inline constexpr std::string_view kLeafScaleX = "Leaf Scale X";
inline constexpr std::string_view kLeafScaleTaper = "Leaf Scale Taper";
inline constexpr std::string_view kHorizontalLeaves = "Horizontal Leaves";
inline constexpr std::string_view kLeafAngle = "Leaf Angle";
}  // namespace pn

}  // namespace treesketch
