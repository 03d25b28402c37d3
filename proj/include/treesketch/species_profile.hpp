#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "treesketch/params.hpp"

namespace treesketch {

enum class Species { Maple, Pine, Bonsai, Palm, Cherry };

inline constexpr std::array<Species, 5> kAllSpecies = {Species::Maple, Species::Pine, Species::Bonsai,
                                                       Species::Palm, Species::Cherry};

std::string_view species_name(Species s);
Species parse_species(std::string_view name);

// One entry of the characteristic-parameter set used for species identification.
struct CharacteristicParam {
  std::string name;
  std::optional<std::size_t> level;  // set for per-level parameters
  double value = 0.0;
  double epsilon = 0.0;
};

// 5% of the value with an absolute floor of 1e-3.
double default_epsilon(double value);

struct TextureAsset {
  std::string bark;
  std::string leaf;

  std::string id() const { return bark + "+" + leaf; }
};

struct SpeciesProfile {
  Species species = Species::Maple;
  int version = 1;
  TreeParams fixed;
  // Per-level parameters carry either one range (shared) or one per level.
  std::map<std::string, std::vector<Range>, std::less<>> unfixed_ranges;
  std::vector<CharacteristicParam> characteristic;
  TextureAsset texture;
};

// Returns human-readable problems; empty when the profile is consistent with the registry.
std::vector<std::string> check_profile(const SpeciesProfile& profile,
                                       const ParamRegistry& registry = ParamRegistry::standard());

SpeciesProfile profile_from_json(const nlohmann::json& j,
                                 const ParamRegistry& registry = ParamRegistry::standard());
SpeciesProfile load_profile(const std::filesystem::path& path);

// Directory holding the shipped profile files; TREESKETCH_DATA overrides the build-time default.
std::filesystem::path data_directory();

// The five shipped profiles, in Species enum order.
const std::vector<SpeciesProfile>& standard_profiles();
const SpeciesProfile& standard_profile(Species s);

// Copies fixed values and draws each unfixed parameter uniformly from its range.
TreeParams randomize(const SpeciesProfile& profile, std::uint64_t seed,
                     const ParamRegistry& registry = ParamRegistry::standard());

}  // namespace treesketch
