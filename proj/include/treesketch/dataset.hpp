#pragma once

// Synthetic dataset generation: per tree, randomized parameters, meshes, four
// views of sketch + ground-truth renders; plus the normalization record and a
// manifest tying it together.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "treesketch/codec.hpp"
#include "treesketch/raster.hpp"
#include "treesketch/sketch.hpp"
#include "treesketch/species_id.hpp"
#include "treesketch/species_profile.hpp"

namespace treesketch {

inline constexpr int kDeskTreesPerSpecies = 5;
inline constexpr int kPaperTreesPerSpecies = 250;
inline constexpr int kDefaultResolution = 608;

struct GenerateOptions {
  std::vector<Species> species{kAllSpecies.begin(), kAllSpecies.end()};
  int trees_per_species = kDeskTreesPerSpecies;
  std::vector<View> views{kAllViews.begin(), kAllViews.end()};
  int resolution = kDefaultResolution;
  std::uint64_t seed = 0;
  std::filesystem::path out;
  bool fail_fast = false;
  bool write_meshes = true;
  bool normalize_nonnegative = false;
  unsigned workers = 0;  // 0: one per hardware thread
  SketchConfig sketch;
  // Replaces the shipped profile of each listed species.
  std::vector<SpeciesProfile> profiles;
};

enum class Split { Train, Validation };
std::string_view split_name(Split s);

struct SampleRecord {
  Species species = Species::Maple;
  int tree = 0;
  View view = View::Front;
  Split split = Split::Train;
  std::string sketch;  // paths relative to the dataset root
  std::string gt;
  std::string params;
};

struct TreeRecord {
  Species species = Species::Maple;
  int tree = 0;
  std::uint64_t seed = 0;
  std::string dir;
  std::optional<std::string> error;
};

struct DatasetManifest {
  int version = 1;
  std::vector<Species> species;
  int trees_per_species = 0;
  std::vector<View> views;
  int resolution = 0;
  std::uint64_t seed = 0;
  std::vector<TreeRecord> trees;
  std::vector<SampleRecord> samples;
  std::string normalization;

  std::size_t count(Split s) const;
};

// Seed of one tree, independent of every other tree.
std::uint64_t tree_seed(std::uint64_t global_seed, Species species, int tree);

// The held-out view of a species: one per species, cycling through the views.
View validation_view(Species species, const std::vector<View>& views);

std::string tree_directory(Species species, int tree);

DatasetManifest generate_dataset(const GenerateOptions& options);

nlohmann::json manifest_to_json(const DatasetManifest& m);
DatasetManifest manifest_from_json(const nlohmann::json& j);
DatasetManifest load_manifest(const std::filesystem::path& path);

struct Reconstruction {
  std::optional<Identification> species;
  std::optional<std::string> texture;
  std::string note;
};

// Grows the meshes for a parameter file, writes both OBJ files and a JSON
// sidecar next to the skeleton with the identified species and texture.
Reconstruction reconstruct(const std::filesystem::path& params_file, const std::filesystem::path& skeleton_obj,
                           const std::filesystem::path& foliage_obj);

}  // namespace treesketch
