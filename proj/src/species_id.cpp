#include "treesketch/species_id.hpp"

#include <cmath>
#include <string>

#include "treesketch/errors.hpp"

namespace treesketch {

namespace {
std::size_t slot(Species s) { return static_cast<std::size_t>(s); }
}  // namespace

double EligibilityTally::percentage(Species s) const {
  const int n = characteristic_count[slot(s)];
  return n > 0 ? double(counter[slot(s)]) / n : 0.0;
}

EligibilityTally tally(const TreeParams& params, std::span<const SpeciesProfile> profiles,
                       const ParamRegistry& registry) {
  EligibilityTally t;
  for (const SpeciesProfile& profile : profiles) {
    t.characteristic_count[slot(profile.species)] += static_cast<int>(profile.characteristic.size());
    for (const CharacteristicParam& cp : profile.characteristic) {
      if (!params.has(cp.name)) continue;
      const ParamSpec* spec = registry.find(cp.name);
      if (!spec) continue;
      double value = 0.0;
      try {
        value = numeric_value(params, *spec, cp.level.value_or(0));
      } catch (const Error&) {
        continue;  // wrong type or arity counts as no match
      }
      if (std::abs(value - cp.value) <= cp.epsilon) ++t.counter[slot(profile.species)];
    }
  }
  return t;
}

Identification identify(const TreeParams& params, std::span<const SpeciesProfile> profiles,
                        const ParamRegistry& registry) {
  if (profiles.empty()) throw ValidationError("no species profiles");
  Identification id;
  id.tally = tally(params, profiles, registry);
  bool any = false;
  for (int c : id.tally.counter) any = any || c > 0;
  if (!any) throw ValidationError("unidentifiable dictionary");

  double best = -1.0;
  for (Species s : kAllSpecies) {
    if (id.tally.characteristic_count[slot(s)] == 0) continue;
    const double pct = id.tally.percentage(s);
    if (pct > best) {
      best = pct;
      id.species = s;
      id.tied = {s};
    } else if (pct == best) {
      id.tied.push_back(s);
    }
  }
  id.percentage = best;
  return id;
}

Identification identify(const TreeParams& params) { return identify(params, standard_profiles()); }

const TextureAsset& texture_for(Species s, std::span<const SpeciesProfile> profiles) {
  for (const auto& p : profiles)
    if (p.species == s) return p.texture;
  throw ValidationError("no texture configured for " + std::string(species_name(s)));
}

const TextureAsset& texture_for(Species s) { return texture_for(s, standard_profiles()); }

}  // namespace treesketch
