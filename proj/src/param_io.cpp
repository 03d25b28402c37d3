#include "treesketch/param_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "treesketch/errors.hpp"

namespace treesketch {

namespace {

nlohmann::json number_json(const ParamSpec* spec, double v) {
  if (spec) {
    switch (spec->kind) {
      case ValueKind::Bool:
        if (v == 0.0 || v == 1.0) return v != 0.0;
        break;
      case ValueKind::Int:
      case ValueKind::BinarySign:
        if (v == std::floor(v) && std::abs(v) < 9.0e15) return static_cast<std::int64_t>(v);
        break;
      default:
        break;
    }
  }
  return v;
}

}  // namespace

nlohmann::json params_to_json(const TreeParams& params, const ParamRegistry& registry) {
  // ordered_json would keep registry order, but plain json sorts keys, which
  // is stable and diff-friendly.
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, value] : params.values()) {
    const auto* spec = registry.find(name);
    if (const auto* d = std::get_if<double>(&value)) {
      j[name] = number_json(spec, *d);
    } else if (const auto* s = std::get_if<std::string>(&value)) {
      j[name] = *s;
    } else {
      auto arr = nlohmann::json::array();
      for (double x : std::get<std::vector<double>>(value)) arr.push_back(number_json(spec, x));
      j[name] = std::move(arr);
    }
  }
  return j;
}

TreeParams params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("parameter file must contain a JSON object");
  TreeParams p;
  for (const auto& [key, value] : j.items()) {
    if (value.is_boolean()) {
      p.set(key, value.get<bool>() ? 1.0 : 0.0);
    } else if (value.is_number()) {
      p.set(key, value.get<double>());
    } else if (value.is_string()) {
      p.set(key, value.get<std::string>());
    } else if (value.is_array()) {
      std::vector<double> vec;
      for (const auto& x : value) {
        if (x.is_boolean()) {
          vec.push_back(x.get<bool>() ? 1.0 : 0.0);
        } else if (x.is_number()) {
          vec.push_back(x.get<double>());
        } else {
          throw ValidationError("parameter '" + key + "' has a non-numeric array entry");
        }
      }
      p.set(key, std::move(vec));
    } else {
      throw ValidationError("parameter '" + key + "' has unsupported JSON type");
    }
  }
  return p;
}

std::string dump_params(const TreeParams& params) { return params_to_json(params).dump(2) + "\n"; }

void save_params(const TreeParams& params, const std::filesystem::path& path) {
  write_text(path, dump_params(params));
}

TreeParams load_params(const std::filesystem::path& path) { return params_from_json(read_json(path)); }

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("malformed JSON in '" + path.string() + "': " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace treesketch
