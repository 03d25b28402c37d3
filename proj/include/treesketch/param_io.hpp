#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "treesketch/params.hpp"

namespace treesketch {

// Parameter dictionaries are JSON objects: one key per registry entry, enum
// values as labels, booleans as true/false, per-level values as 4-arrays.
nlohmann::json params_to_json(const TreeParams& params,
                              const ParamRegistry& registry = ParamRegistry::standard());
TreeParams params_from_json(const nlohmann::json& j);

std::string dump_params(const TreeParams& params);
void save_params(const TreeParams& params, const std::filesystem::path& path);
TreeParams load_params(const std::filesystem::path& path);

// Shared helpers for the other JSON file formats.
nlohmann::json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace treesketch
