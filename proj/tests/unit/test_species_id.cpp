#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "treesketch/errors.hpp"
#include "treesketch/species_id.hpp"

using namespace treesketch;

namespace {

SpeciesProfile toy(Species s, double levels, double trunk_height) {
  SpeciesProfile p;
  p.species = s;
  p.characteristic = {{std::string(pn::kLevels), std::nullopt, levels, default_epsilon(levels)},
                      {std::string(pn::kTrunkHeight), std::nullopt, trunk_height, default_epsilon(trunk_height)}};
  p.texture = {std::string(species_name(s)), "leaf"};
  return p;
}

}  // namespace

TEST_CASE("species names round-trip") {
  for (auto s : kAllSpecies) CHECK(parse_species(species_name(s)) == s);
  CHECK_THROWS_AS(parse_species("oak"), ValidationError);
}

TEST_CASE("tally counts matches within epsilon") {
  const std::vector<SpeciesProfile> profiles{toy(Species::Maple, 2, 0.3), toy(Species::Pine, 3, 0.3)};
  TreeParams p;
  p.set(std::string(pn::kLevels), 2.0);
  p.set(std::string(pn::kTrunkHeight), 0.3149);
  auto t = tally(p, profiles);
  CHECK(t.counter[0] == 2);
  CHECK(t.counter[1] == 1);
  CHECK(t.percentage(Species::Maple) == 1.0);
  CHECK(t.percentage(Species::Pine) == 0.5);
  CHECK(t.percentage(Species::Palm) == 0.0);
  p.set(std::string(pn::kTrunkHeight), 0.316);
  CHECK(tally(p, profiles).counter[0] == 1);
}

TEST_CASE("identify picks the best percentage and breaks ties by enum order") {
  const std::vector<SpeciesProfile> profiles{toy(Species::Pine, 2, 0.3), toy(Species::Maple, 2, 0.3),
                                             toy(Species::Palm, 4, 0.01)};
  TreeParams p;
  p.set(std::string(pn::kLevels), 2.0);
  p.set(std::string(pn::kTrunkHeight), 0.3);
  const auto id = identify(p, profiles);
  CHECK(id.species == Species::Maple);
  CHECK(id.tied == std::vector<Species>{Species::Maple, Species::Pine});
  CHECK(id.percentage == 1.0);

  p.set(std::string(pn::kLevels), 4.0);
  p.set(std::string(pn::kTrunkHeight), 0.01);
  CHECK(identify(p, profiles).species == Species::Palm);
  CHECK(identify(p, profiles).tied.size() == 1);

  p.set(std::string(pn::kLevels), 1.0);
  p.set(std::string(pn::kTrunkHeight), 0.9);
  CHECK_THROWS_WITH_AS(identify(p, profiles), "unidentifiable dictionary", ValidationError);
}

TEST_CASE("wrongly typed values never match") {
  const std::vector<SpeciesProfile> profiles{toy(Species::Maple, 2, 0.3)};
  TreeParams p;
  p.set(std::string(pn::kLevels), std::vector<double>{2, 2, 2, 2});
  p.set(std::string(pn::kTrunkHeight), 0.3);
  CHECK(tally(p, profiles).counter[0] == 1);
}

TEST_CASE("shipped profiles identify their own dictionaries") {
  for (auto s : kAllSpecies) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto id = identify(randomize(standard_profile(s), seed));
      CHECK(id.species == s);
      CHECK(id.percentage == 1.0);
      CHECK(id.tied.size() == 1);
    }
  }
}

TEST_CASE("shipped characteristic sets are fixed and distinguish every pair") {
  for (const auto& prof : standard_profiles()) {
    for (const auto& cp : prof.characteristic) CHECK(prof.fixed.has(cp.name));
    for (const auto& other : standard_profiles()) {
      if (other.species == prof.species) continue;
      CHECK(tally(other.fixed, std::span(&prof, 1)).percentage(prof.species) < 1.0);
    }
  }
}

TEST_CASE("textures come from the profiles") {
  std::set<std::string> ids;
  for (auto s : kAllSpecies) ids.insert(texture_for(s).id());
  CHECK(ids.size() == kAllSpecies.size());
  const std::vector<SpeciesProfile> only{toy(Species::Maple, 2, 0.3)};
  CHECK_THROWS_AS(texture_for(Species::Pine, only), ValidationError);
}
