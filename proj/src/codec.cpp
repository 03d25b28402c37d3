#include "treesketch/codec.hpp"

#include <algorithm>
#include <cmath>

#include "treesketch/errors.hpp"
#include "treesketch/param_io.hpp"

namespace treesketch {

std::size_t TargetBundle::total_cols() const {
  std::size_t n = 0;
  for (const auto& g : groups) n += g.cols();
  return n;
}

TargetMatrix encode(const TreeParams& params, const ParamRegistry& registry) {
  std::vector<std::string> missing;
  for (const auto& spec : registry.entries())
    if (!params.has(spec.name)) missing.push_back(spec.name);
  if (!missing.empty()) {
    std::string msg = "missing parameter:";
    for (const auto& m : missing) msg += " '" + m + "'";
    throw ValidationError(msg);
  }
  if (const auto v = validate(params, registry); !v.empty()) throw ValidationError(describe(v.front()));

  std::vector<std::string> keys;
  for (const auto& spec : registry.entries()) keys.push_back(spec.name);
  TargetMatrix m(std::move(keys));
  for (std::size_t c = 0; c < registry.total_count(); ++c) {
    const ParamSpec& spec = registry.entries()[c];
    for (std::size_t r = 0; r < kTargetRows; ++r) {
      double v = numeric_value(params, spec, spec.per_level() ? r : 0);
      if (spec.kind == ValueKind::BinarySign) v = v > 0 ? 1.0 : 0.0;
      m.at(r, c) = v;
    }
  }
  return m;
}

TargetBundle split_groups(const TargetMatrix& m, const ParamRegistry& registry) {
  TargetBundle b;
  std::array<std::vector<std::size_t>, kAllGroups.size()> source;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    const ParamSpec& spec = registry.at(m.keys[c]);
    source[group_index(spec.group)].push_back(c);
  }
  for (std::size_t g = 0; g < b.groups.size(); ++g) {
    std::vector<std::string> keys;
    for (std::size_t c : source[g]) keys.push_back(m.keys[c]);
    b.groups[g] = KeyedMatrix(std::move(keys));
    for (std::size_t r = 0; r < kTargetRows; ++r)
      for (std::size_t k = 0; k < source[g].size(); ++k) b.groups[g].at(r, k) = m.at(r, source[g][k]);
  }
  return b;
}

TargetMatrix merge(const TargetBundle& b, const ParamRegistry& registry) {
  std::vector<std::string> keys;
  for (const auto& spec : registry.entries()) keys.push_back(spec.name);
  TargetMatrix m(std::move(keys));
  std::vector<bool> seen(m.cols(), false);
  for (const auto& g : b.groups) {
    for (std::size_t k = 0; k < g.cols(); ++k) {
      const std::size_t c = registry.index_of(g.keys[k]);
      if (seen[c]) throw ValidationError("column appears twice: " + g.keys[k]);
      seen[c] = true;
      for (std::size_t r = 0; r < kTargetRows; ++r) m.at(r, c) = g.at(r, k);
    }
  }
  for (std::size_t c = 0; c < seen.size(); ++c)
    if (!seen[c]) throw ValidationError("missing parameter: '" + m.keys[c] + "'");
  return m;
}

namespace {

double snap(const ParamSpec& spec, double v) {
  if (!std::isfinite(v)) throw ValidationError("unsnappable value for " + spec.name);
  switch (spec.kind) {
    case ValueKind::Float: return std::clamp(v, spec.range.min, spec.range.max);
    case ValueKind::Int: return std::clamp(std::round(v), spec.range.min, spec.range.max);
    case ValueKind::Bool: return std::clamp(std::round(v), 0.0, 1.0);
    case ValueKind::BinarySign: return std::clamp(std::round(v), 0.0, 1.0) > 0.5 ? 1.0 : -1.0;
    case ValueKind::Enum:
      if (spec.labels.empty()) throw ValidationError("unsnappable value for " + spec.name);
      return std::clamp(std::round(v), 0.0, double(spec.labels.size() - 1));
  }
  return v;
}

}  // namespace

TreeParams decode(const TargetBundle& bundle, const ParamRegistry& registry) {
  const TargetMatrix m = merge(bundle, registry);
  TreeParams p;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    const ParamSpec& spec = registry.entries()[c];
    if (spec.kind == ValueKind::Enum) {
      p.set(spec.name, spec.labels[static_cast<std::size_t>(snap(spec, m.at(0, c)))]);
    } else if (spec.per_level()) {
      std::vector<double> v(kTargetRows);
      for (std::size_t r = 0; r < kTargetRows; ++r) v[r] = snap(spec, m.at(r, c));
      p.set(spec.name, std::move(v));
    } else {
      p.set(spec.name, snap(spec, m.at(0, c)));
    }
  }
  return p;
}

bool is_normalized_group(MagnitudeGroup g, bool include_nonnegative) {
  return g == MagnitudeGroup::Unbounded || g == MagnitudeGroup::Angle ||
         (include_nonnegative && g == MagnitudeGroup::NonNegative);
}

NormalizationRecord build_record(std::span<const TargetBundle> training, bool include_nonnegative,
                                 const ParamRegistry& registry) {
  NormalizationRecord rec;
  rec.include_nonnegative = include_nonnegative;
  for (const auto& spec : registry.entries())
    if (is_normalized_group(spec.group, include_nonnegative)) rec.max_abs[spec.name] = 0.0;
  for (const auto& b : training) {
    for (MagnitudeGroup g : kAllGroups) {
      if (!is_normalized_group(g, include_nonnegative)) continue;
      const KeyedMatrix& m = b.group(g);
      for (std::size_t k = 0; k < m.cols(); ++k) {
        auto it = rec.max_abs.find(m.keys[k]);
        if (it == rec.max_abs.end()) continue;
        for (std::size_t r = 0; r < kTargetRows; ++r) it->second = std::max(it->second, std::abs(m.at(r, k)));
      }
    }
  }
  for (auto& [name, v] : rec.max_abs)
    if (v == 0.0) v = 1.0;
  return rec;
}

namespace {

template <typename Op>
TargetBundle scale_bundle(const TargetBundle& b, const NormalizationRecord& rec, Op op) {
  TargetBundle out = b;
  for (MagnitudeGroup g : kAllGroups) {
    if (!is_normalized_group(g, rec.include_nonnegative)) continue;
    KeyedMatrix& m = out.group(g);
    for (std::size_t k = 0; k < m.cols(); ++k) {
      const auto it = rec.max_abs.find(m.keys[k]);
      if (it == rec.max_abs.end()) throw ValidationError("normalization record lacks " + m.keys[k]);
      if (!(it->second > 0.0) || !std::isfinite(it->second))
        throw ValidationError("unnormalizable column: " + m.keys[k]);
      for (std::size_t r = 0; r < kTargetRows; ++r) m.at(r, k) = op(m.at(r, k), it->second);
    }
  }
  return out;
}

}  // namespace

TargetBundle normalize(const TargetBundle& b, const NormalizationRecord& record) {
  return scale_bundle(b, record, [](double v, double s) { return v / s; });
}

TargetBundle denormalize(const TargetBundle& b, const NormalizationRecord& record) {
  return scale_bundle(b, record, [](double v, double s) { return v * s; });
}

nlohmann::json bundle_to_json(const TargetBundle& b) {
  nlohmann::json groups = nlohmann::json::object();
  for (MagnitudeGroup g : kAllGroups) {
    const KeyedMatrix& m = b.group(g);
    groups[std::string(group_name(g))] = {{"keys", m.keys}, {"rows", kTargetRows}, {"data", m.data}};
  }
  return {{"version", 1}, {"groups", groups}};
}

TargetBundle bundle_from_json(const nlohmann::json& j) {
  try {
    TargetBundle b;
    for (const auto& [name, g] : j.at("groups").items()) {
      KeyedMatrix m(g.at("keys").get<std::vector<std::string>>());
      if (g.at("rows").get<std::size_t>() != kTargetRows) throw ValidationError("bundle rows must be 4");
      m.data = g.at("data").get<std::vector<double>>();
      if (m.data.size() != kTargetRows * m.cols()) throw ValidationError("bundle data size mismatch in " + name);
      b.group(parse_group(name)) = std::move(m);
    }
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed target bundle: ") + e.what());
  }
}

nlohmann::json record_to_json(const NormalizationRecord& r) {
  nlohmann::json m = nlohmann::json::object();
  for (const auto& [k, v] : r.max_abs) m[k] = v;
  return {{"version", r.version}, {"include_nonnegative", r.include_nonnegative}, {"max_abs", m}};
}

NormalizationRecord record_from_json(const nlohmann::json& j) {
  try {
    NormalizationRecord r;
    r.version = j.value("version", 1);
    r.include_nonnegative = j.value("include_nonnegative", false);
    for (const auto& [k, v] : j.at("max_abs").items()) r.max_abs[k] = v.get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed normalization record: ") + e.what());
  }
}

void save_bundle(const TargetBundle& b, const std::filesystem::path& path) {
  write_text(path, bundle_to_json(b).dump(2) + "\n");
}
TargetBundle load_bundle(const std::filesystem::path& path) { return bundle_from_json(read_json(path)); }
void save_record(const NormalizationRecord& r, const std::filesystem::path& path) {
  write_text(path, record_to_json(r).dump(2) + "\n");
}
NormalizationRecord load_record(const std::filesystem::path& path) { return record_from_json(read_json(path)); }

}  // namespace treesketch
