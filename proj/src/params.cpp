#include "treesketch/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "treesketch/errors.hpp"

namespace treesketch {

namespace {

using G = MagnitudeGroup;
using K = ValueKind;
using A = Arity;

const std::vector<std::string> kShapeLabels = {
    "conical",         "spherical", "hemispherical", "cylindrical", "tapered_cylindrical",
    "flame",           "inverse_conical", "tend_flame", "envelope",  "custom"};

ParamSpec spec(std::string_view name, K kind, A arity, G group, Range range,
               std::vector<std::string> labels = {}) {
  ParamSpec s;
  s.name = std::string(name);
  s.kind = kind;
  s.arity = arity;
  s.group = group;
  s.range = range;
  s.labels = std::move(labels);
  if (kind == K::Enum) s.range = Range{0.0, static_cast<double>(s.labels.size() - 1)};
  if (kind == K::Bool) s.range = Range{0.0, 1.0};
  if (kind == K::BinarySign) s.range = Range{-1.0, 1.0};
  return s;
}

std::vector<ParamSpec> standard_entries() {
  namespace n = pn;
  const Range angle{-360.0, 360.0};
  const Range unit{0.0, 1.0};
  const Range nonneg{0.0, kInf};
  const Range any{-kInf, kInf};
  const Range signed_unit{-1.0, 1.0};
  return {
      // Geometry
      spec(n::kBevelResolution, K::Int, A::Scalar, G::Bounded, {0, 32}),
      spec(n::kHandleType, K::Enum, A::Scalar, G::Bounded, {}, {"auto", "vector"}),
      spec(n::kShape, K::Enum, A::Scalar, G::Bounded, {}, kShapeLabels),
      spec(n::kCustomShape, K::Float, A::PerLevel, G::Bounded, {0.01, 1.0}),
      spec(n::kSecondarySplits, K::Enum, A::Scalar, G::Bounded, {}, kShapeLabels),
      spec(n::kBranchDistribution, K::Float, A::Scalar, G::NonNegative, nonneg),
      spec(n::kBranchWhorls, K::Int, A::Scalar, G::NonNegative, nonneg),
      spec(n::kRandomSeed, K::Int, A::Scalar, G::NonNegative, {0, 4294967295.0}),
      spec(n::kScale, K::Float, A::Scalar, G::NonNegative, nonneg),
      spec(n::kScaleVariation, K::Float, A::Scalar, G::NonNegative, nonneg),
      // Branch radius
      spec(n::kRatio, K::Float, A::Scalar, G::UnitInterval, unit),
      spec(n::kRadiusScale, K::Float, A::Scalar, G::NonNegative, nonneg),
      spec(n::kRadiusScaleVariation, K::Float, A::Scalar, G::UnitInterval, unit),
      spec(n::kBranchRadiusRatio, K::Float, A::Scalar, G::NonNegative, nonneg),
      spec(n::kMinimumRadius, K::Float, A::Scalar, G::UnitInterval, unit),
      spec(n::kCloseTip, K::Bool, A::Scalar, G::UnitInterval, unit),
      spec(n::kRootFlare, K::Float, A::Scalar, G::NonNegative, nonneg),
      spec(n::kTaper, K::Float, A::PerLevel, G::UnitInterval, unit),
      spec(n::kTweakRadius, K::Float, A::PerLevel, G::NonNegative, nonneg),
      // Branch splitting
      spec(n::kLevels, K::Int, A::Scalar, G::Bounded, {1, 4}),
      spec(n::kTreeForks, K::Int, A::Scalar, G::Bounded, {0, 8}),
      spec(n::kTrunkHeight, K::Float, A::Scalar, G::UnitInterval, unit),
      spec(n::kSecondaryBaseSize, K::Float, A::Scalar, G::UnitInterval, unit),
      spec(n::kSplitHeight, K::Float, A::Scalar, G::UnitInterval, unit),
      spec(n::kSplitBias, K::Float, A::Scalar, G::Unbounded, any),
      spec(n::kBranches, K::Int, A::PerLevel, G::NonNegative, nonneg),
      spec(n::kSegmentSplits, K::Float, A::PerLevel, G::Bounded, {0, 3}),
      spec(n::kSiblingAngle, K::Float, A::PerLevel, G::Angle, angle),
      spec(n::kSiblingAngleVariance, K::Float, A::PerLevel, G::Angle, angle),
      spec(n::kBranchRollAngle, K::Float, A::PerLevel, G::Angle, angle),
      spec(n::kBranchRollAngleVariance, K::Float, A::PerLevel, G::Angle, angle),
      spec(n::kParentBranchRollAngle, K::Float, A::Scalar, G::Angle, angle),
      spec(n::kBranchRotate, K::Float, A::Scalar, G::Angle, angle),
      spec(n::kOutwardAttraction, K::Float, A::PerLevel, G::SignedUnit, signed_unit),
      spec(n::kBranchingMode, K::Enum, A::Scalar, G::Bounded, {},
           {"original", "rotate", "random", "distance"}),
      spec(n::kCurveResolution, K::Int, A::PerLevel, G::Bounded, {1, 32}),
      spec(n::kSign, K::BinarySign, A::Scalar, G::UnitInterval, {}),
      // Branch growth
      spec(n::kTaperCrown, K::Float, A::Scalar, G::UnitInterval, unit),
      spec(n::kLength, K::Float, A::PerLevel, G::UnitInterval, unit),
      spec(n::kLengthVariation, K::Float, A::PerLevel, G::UnitInterval, unit),
      spec(n::kParentBranchAngle, K::Float, A::PerLevel, G::Angle, angle),
      spec(n::kParentBranchAngleVariance, K::Float, A::PerLevel, G::Angle, angle),
      spec(n::kCurvature, K::Float, A::PerLevel, G::Angle, angle),
      spec(n::kCurvatureVariance, K::Float, A::PerLevel, G::Angle, angle),
      spec(n::kBackCurvature, K::Float, A::PerLevel, G::Angle, angle),
      spec(n::kVerticalAttraction, K::Float, A::PerLevel, G::Unbounded, any),
      spec(n::kUseOldDownAngleVariation, K::Bool, A::Scalar, G::UnitInterval, unit),
      spec(n::kUseParentAngle, K::Bool, A::Scalar, G::UnitInterval, unit),
      // Leaves
      spec(n::kShowLeaves, K::Bool, A::Scalar, G::UnitInterval, unit),
      spec(n::kLeafShape, K::Enum, A::Scalar, G::Bounded, {},
           {"rectangular", "hexagonal", "dupliface", "duplivert"}),
      spec(n::kLeaves, K::Int, A::Scalar, G::NonNegative, nonneg),
      spec(n::kLeafDistribution, K::Enum, A::Scalar, G::Bounded, {}, kShapeLabels),
      spec(n::kLeafDownAngle, K::Float, A::Scalar, G::Angle, angle),
      spec(n::kLeafDownAngleVariation, K::Float, A::Scalar, G::Angle, angle),
      spec(n::kLeafRollAngle, K::Float, A::Scalar, G::Angle, angle),
      spec(n::kLeafAngleVariance, K::Float, A::Scalar, G::Angle, angle),
      spec(n::kLeafScale, K::Float, A::Scalar, G::NonNegative, nonneg),
      spec(n::kLeafScaleVariance, K::Float, A::Scalar, G::UnitInterval, unit),
      spec(n::kLeafScaleX, K::Float, A::Scalar, G::UnitInterval, unit),
      spec(n::kLeafScaleTaper, K::Float, A::Scalar, G::SignedUnit, signed_unit),
      spec(n::kHorizontalLeaves, K::Bool, A::Scalar, G::UnitInterval, unit),
      spec(n::kLeafAngle, K::Float, A::Scalar, G::Angle, angle),
  };
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string format_value(const ParamValue& v) {
  if (const auto* d = std::get_if<double>(&v)) return format_number(*d);
  if (const auto* s = std::get_if<std::string>(&v)) return "\"" + *s + "\"";
  const auto& vec = std::get<std::vector<double>>(v);
  std::string out = "[";
  for (std::size_t i = 0; i < vec.size(); ++i) {
    if (i) out += ", ";
    out += format_number(vec[i]);
  }
  return out + "]";
}

// Range/kind rules for one numeric entry; empty string when valid.
std::string check_number(const ParamSpec& s, double v) {
  if (!std::isfinite(v)) return "non-finite value";
  if (!s.range.contains(v)) {
    return "out of range [" + format_number(s.range.min) + ", " + format_number(s.range.max) + "]";
  }
  switch (s.kind) {
    case ValueKind::Int:
      if (v != std::floor(v)) return "integer expected";
      break;
    case ValueKind::Bool:
      if (v != 0.0 && v != 1.0) return "boolean expected";
      break;
    case ValueKind::BinarySign:
      if (v != -1.0 && v != 1.0) return "binary sign must be -1 or +1";
      break;
    default:
      break;
  }
  return {};
}

}  // namespace

std::string_view group_name(MagnitudeGroup g) {
  switch (g) {
    case G::Unbounded: return "[-inf,inf]";
    case G::Angle: return "[-360,360]";
    case G::UnitInterval: return "[0,1]";
    case G::NonNegative: return "[0,inf]";
    case G::Bounded: return "[min,max]";
    case G::SignedUnit: return "[-1,1]";
  }
  return "?";
}

MagnitudeGroup parse_group(std::string_view name) {
  for (auto g : kAllGroups)
    if (group_name(g) == name) return g;
  throw ValidationError("unknown magnitude group '" + std::string(name) + "'");
}

std::size_t group_index(MagnitudeGroup g) { return static_cast<std::size_t>(g); }

const ParamRegistry& ParamRegistry::standard() {
  static const ParamRegistry registry(standard_entries());
  return registry;
}

ParamRegistry::ParamRegistry(std::vector<ParamSpec> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!index_.emplace(entries_[i].name, i).second)
      throw Error("duplicate registry entry '" + entries_[i].name + "'");
  }
}

const ParamSpec* ParamRegistry::find(std::string_view name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

const ParamSpec& ParamRegistry::at(std::string_view name) const {
  if (const auto* s = find(name)) return *s;
  throw ValidationError("unregistered parameter '" + std::string(name) + "'");
}

std::size_t ParamRegistry::index_of(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw ValidationError("unregistered parameter '" + std::string(name) + "'");
  return it->second;
}

std::size_t ParamRegistry::group_count(MagnitudeGroup g) const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += e.group == g ? 1 : 0;
  return n;
}

const ParamValue& TreeParams::get(std::string_view name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw ValidationError("missing parameter '" + std::string(name) + "'");
  return it->second;
}

void TreeParams::erase(std::string_view name) {
  auto it = values_.find(name);
  if (it != values_.end()) values_.erase(it);
}

double TreeParams::scalar(std::string_view name) const {
  const auto& v = get(name);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  throw ValidationError("parameter '" + std::string(name) + "' is not a scalar");
}

double TreeParams::level(std::string_view name, std::size_t lvl) const {
  const auto& v = get(name);
  const auto* vec = std::get_if<std::vector<double>>(&v);
  if (!vec || lvl >= vec->size())
    throw ValidationError("parameter '" + std::string(name) + "' has no level " + std::to_string(lvl));
  return (*vec)[lvl];
}

std::array<double, kLevelCount> TreeParams::levels(std::string_view name) const {
  std::array<double, kLevelCount> out{};
  for (std::size_t i = 0; i < kLevelCount; ++i) out[i] = level(name, i);
  return out;
}

const std::string& TreeParams::label(std::string_view name) const {
  const auto& v = get(name);
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  throw ValidationError("parameter '" + std::string(name) + "' is not a label");
}

int TreeParams::integer(std::string_view name) const {
  return static_cast<int>(std::lround(scalar(name)));
}

std::vector<Violation> validate(const TreeParams& params, const ParamRegistry& registry) {
  std::vector<Violation> out;
  for (const auto& [name, value] : params.values()) {
    if (!registry.find(name)) out.push_back({name, "unregistered parameter", format_value(value)});
  }
  for (const auto& s : registry.entries()) {
    if (!params.has(s.name)) {
      out.push_back({s.name, "missing parameter", "<absent>"});
      continue;
    }
    const auto& value = params.get(s.name);
    if (s.kind == ValueKind::Enum) {
      const auto* label = std::get_if<std::string>(&value);
      if (!label) {
        out.push_back({s.name, "enum label expected", format_value(value)});
      } else if (std::find(s.labels.begin(), s.labels.end(), *label) == s.labels.end()) {
        out.push_back({s.name, "unencodable label", format_value(value)});
      }
      continue;
    }
    if (s.per_level()) {
      const auto* vec = std::get_if<std::vector<double>>(&value);
      if (!vec) {
        out.push_back({s.name, "per-level vector of 4 expected", format_value(value)});
        continue;
      }
      if (vec->size() != kLevelCount) {
        out.push_back({s.name, "arity: expected 4 entries, got " + std::to_string(vec->size()),
                       format_value(value)});
        continue;
      }
      for (std::size_t i = 0; i < vec->size(); ++i) {
        auto rule = check_number(s, (*vec)[i]);
        if (!rule.empty())
          out.push_back({s.name, rule + " at level " + std::to_string(i), format_number((*vec)[i])});
      }
      continue;
    }
    const auto* d = std::get_if<double>(&value);
    if (!d) {
      out.push_back({s.name, "scalar expected", format_value(value)});
      continue;
    }
    auto rule = check_number(s, *d);
    if (!rule.empty()) out.push_back({s.name, rule, format_number(*d)});
  }
  return out;
}

std::string describe(const Violation& v) {
  return v.parameter + ": " + v.rule + " (value " + v.value + ")";
}

double encode_enum(std::string_view name, std::string_view label, const ParamRegistry& registry) {
  const auto& s = registry.at(name);
  if (s.kind != ValueKind::Enum) throw ValidationError("'" + s.name + "' is not an enum parameter");
  for (std::size_t i = 0; i < s.labels.size(); ++i)
    if (s.labels[i] == label) return static_cast<double>(i);
  throw ValidationError("unencodable label '" + std::string(label) + "' for '" + s.name + "'");
}

const std::string& decode_enum(std::string_view name, double code, const ParamRegistry& registry) {
  const auto& s = registry.at(name);
  if (s.kind != ValueKind::Enum) throw ValidationError("'" + s.name + "' is not an enum parameter");
  if (!std::isfinite(code) || code != std::floor(code) || code < 0 ||
      code >= static_cast<double>(s.labels.size()))
    throw ValidationError("unencodable label code " + format_number(code) + " for '" + s.name + "'");
  return s.labels[static_cast<std::size_t>(code)];
}

double numeric_value(const TreeParams& params, const ParamSpec& spec, std::size_t lvl) {
  if (spec.kind == ValueKind::Enum) return encode_enum(spec.name, params.label(spec.name));
  if (spec.per_level()) return params.level(spec.name, lvl);
  return params.scalar(spec.name);
}

}  // namespace treesketch
