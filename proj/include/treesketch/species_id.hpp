#pragma once

#include <array>
#include <span>
#include <vector>

#include "treesketch/params.hpp"
#include "treesketch/species_profile.hpp"

namespace treesketch {

struct EligibilityTally {
  std::array<int, kAllSpecies.size()> counter{};
  std::array<int, kAllSpecies.size()> characteristic_count{};

  // counter / characteristic count; 0 for a species without profile.
  double percentage(Species s) const;
};

struct Identification {
  Species species = Species::Maple;
  double percentage = 0.0;
  EligibilityTally tally;
  std::vector<Species> tied;  // every species sharing the best percentage; size > 1 on a tie
};

// A characteristic parameter matches when the dictionary holds it and
// |value - cp.value| <= cp.epsilon.
EligibilityTally tally(const TreeParams& params, std::span<const SpeciesProfile> profiles,
                       const ParamRegistry& registry = ParamRegistry::standard());

// Species with the highest match percentage, lowest enum order on ties.
// Throws ValidationError("unidentifiable dictionary") when nothing matches.
Identification identify(const TreeParams& params, std::span<const SpeciesProfile> profiles,
                        const ParamRegistry& registry = ParamRegistry::standard());
Identification identify(const TreeParams& params);

const TextureAsset& texture_for(Species s, std::span<const SpeciesProfile> profiles);
const TextureAsset& texture_for(Species s);

}  // namespace treesketch
