#include "treesketch/species_profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "treesketch/errors.hpp"
#include "treesketch/param_io.hpp"
#include "treesketch/rng.hpp"

namespace treesketch {

namespace {

Range range_from_json(const nlohmann::json& j, const std::string& name) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ValidationError("unfixed range for '" + name + "' must be [min, max]");
  return Range{j[0].get<double>(), j[1].get<double>()};
}

const ParamSpec& spec_for(const ParamRegistry& registry, const std::string& name) {
  return registry.at(name);
}

}  // namespace

std::string_view species_name(Species s) {
  switch (s) {
    case Species::Maple: return "maple";
    case Species::Pine: return "pine";
    case Species::Bonsai: return "bonsai";
    case Species::Palm: return "palm";
    case Species::Cherry: return "cherry";
  }
  return "?";
}

Species parse_species(std::string_view name) {
  for (auto s : kAllSpecies)
    if (species_name(s) == name) return s;
  throw ValidationError("unknown species '" + std::string(name) + "'");
}

double default_epsilon(double value) { return std::max(0.05 * std::abs(value), 1e-3); }

std::vector<std::string> check_profile(const SpeciesProfile& profile, const ParamRegistry& registry) {
  std::vector<std::string> problems;
  for (const auto& spec : registry.entries()) {
    const bool fixed = profile.fixed.has(spec.name);
    const bool unfixed = profile.unfixed_ranges.count(spec.name) != 0;
    if (fixed == unfixed)
      problems.push_back(spec.name + (fixed ? ": both fixed and unfixed" : ": unclassified"));
  }
  for (const auto& [name, value] : profile.fixed.values()) {
    (void)value;
    if (!registry.find(name)) problems.push_back(name + ": unregistered fixed parameter");
  }
  for (const auto& [name, ranges] : profile.unfixed_ranges) {
    const auto* spec = registry.find(name);
    if (!spec) {
      problems.push_back(name + ": unregistered unfixed parameter");
      continue;
    }
    const std::size_t expected = spec->per_level() ? kLevelCount : 1;
    if (ranges.size() != 1 && ranges.size() != expected)
      problems.push_back(name + ": wrong number of ranges");
    for (const auto& r : ranges) {
      if (!r.bounded() || r.min > r.max)
        problems.push_back(name + ": unfixed range must be bounded and ordered");
      else if (!spec->range.contains(r.min) || !spec->range.contains(r.max))
        problems.push_back(name + ": unfixed range exceeds legal range");
    }
  }
  // Fixed values must themselves be valid; check them against a partial validate.
  for (const auto& v : validate(profile.fixed, registry)) {
    if (v.rule == "missing parameter" && profile.unfixed_ranges.count(v.parameter)) continue;
    problems.push_back("fixed " + describe(v));
  }
  for (const auto& cp : profile.characteristic) {
    if (!profile.fixed.has(cp.name)) {
      problems.push_back(cp.name + ": characteristic parameter is not fixed");
      continue;
    }
    const auto* spec = registry.find(cp.name);
    if (spec && spec->per_level() != cp.level.has_value())
      problems.push_back(cp.name + ": characteristic level does not match arity");
    if (!(cp.epsilon > 0)) problems.push_back(cp.name + ": epsilon must be positive");
  }
  if (profile.characteristic.empty()) problems.push_back("no characteristic parameters");
  return problems;
}

SpeciesProfile profile_from_json(const nlohmann::json& j, const ParamRegistry& registry) {
  SpeciesProfile p;
  p.species = parse_species(j.at("species").get<std::string>());
  p.version = j.value("version", 1);
  if (j.contains("textures")) {
    p.texture.bark = j["textures"].at("bark").get<std::string>();
    p.texture.leaf = j["textures"].at("leaf").get<std::string>();
  }
  p.fixed = params_from_json(j.at("fixed"));
  for (const auto& [name, value] : j.at("unfixed").items()) {
    std::vector<Range> ranges;
    if (value.is_array() && !value.empty() && value[0].is_array()) {
      for (const auto& r : value) ranges.push_back(range_from_json(r, name));
    } else {
      ranges.push_back(range_from_json(value, name));
    }
    p.unfixed_ranges.emplace(name, std::move(ranges));
  }
  for (const auto& c : j.at("characteristic")) {
    CharacteristicParam cp;
    cp.name = c.at("name").get<std::string>();
    if (c.contains("level")) cp.level = c["level"].get<std::size_t>();
    if (!p.fixed.has(cp.name))
      throw ValidationError("characteristic parameter '" + cp.name + "' is not fixed");
    const auto& spec = spec_for(registry, cp.name);
    cp.value = c.contains("value") ? c["value"].get<double>()
                                   : numeric_value(p.fixed, spec, cp.level.value_or(0));
    cp.epsilon = c.contains("epsilon") ? c["epsilon"].get<double>() : default_epsilon(cp.value);
    p.characteristic.push_back(std::move(cp));
  }
  auto problems = check_profile(p, registry);
  if (!problems.empty()) {
    std::string msg = "invalid species profile '" + std::string(species_name(p.species)) + "':";
    for (const auto& s : problems) msg += "\n  " + s;
    throw ValidationError(msg);
  }
  return p;
}

SpeciesProfile load_profile(const std::filesystem::path& path) { return profile_from_json(read_json(path)); }

std::filesystem::path data_directory() {
  if (const char* env = std::getenv("TREESKETCH_DATA"); env && *env) return env;
  return TREESKETCH_DATA_DIR;
}

const std::vector<SpeciesProfile>& standard_profiles() {
  static const std::vector<SpeciesProfile> profiles = [] {
    std::vector<SpeciesProfile> out;
    for (auto s : kAllSpecies)
      out.push_back(load_profile(data_directory() / "species" / (std::string(species_name(s)) + ".json")));
    return out;
  }();
  return profiles;
}

const SpeciesProfile& standard_profile(Species s) {
  return standard_profiles()[static_cast<std::size_t>(s)];
}

TreeParams randomize(const SpeciesProfile& profile, std::uint64_t seed, const ParamRegistry& registry) {
  TreeParams out = profile.fixed;
  Rng rng(seed);
  auto draw = [&](const ParamSpec& spec, const Range& r) -> double {
    switch (spec.kind) {
      case ValueKind::BinarySign:
        return rng.coin() ? 1.0 : -1.0;
      case ValueKind::Bool:
        return rng.coin() ? 1.0 : 0.0;
      case ValueKind::Int:
      case ValueKind::Enum:
        return static_cast<double>(rng.integer(static_cast<std::int64_t>(std::ceil(r.min)),
                                               static_cast<std::int64_t>(std::floor(r.max))));
      case ValueKind::Float:
        return rng.uniform(r.min, r.max);
    }
    return r.min;
  };
  // Registry order fixes the draw sequence.
  for (const auto& spec : registry.entries()) {
    auto it = profile.unfixed_ranges.find(spec.name);
    if (it == profile.unfixed_ranges.end()) continue;
    const auto& ranges = it->second;
    if (spec.per_level()) {
      std::vector<double> vec(kLevelCount);
      for (std::size_t i = 0; i < kLevelCount; ++i) vec[i] = draw(spec, ranges.size() == 1 ? ranges[0] : ranges[i]);
      out.set(spec.name, std::move(vec));
    } else if (spec.kind == ValueKind::Enum) {
      out.set(spec.name, spec.labels[static_cast<std::size_t>(draw(spec, ranges[0]))]);
    } else {
      out.set(spec.name, draw(spec, ranges[0]));
    }
  }
  return out;
}

}  // namespace treesketch
