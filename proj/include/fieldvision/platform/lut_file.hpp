#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fieldvision/core/lut.hpp"
#include "fieldvision/platform/ppm.hpp"

namespace fv::platform {

inline ColourLUT read_lut_file(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  try {
    return ColourLUT::deserialize(bytes);
  } catch (const LutFormatError& e) {
    throw LutFormatError(path.string() + ": " + e.what());
  }
}

inline void write_lut_file(const std::filesystem::path& path, const ColourLUT& lut) {
  write_file_bytes(path, lut.serialize());
}

class RulesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Colour-rule documents:
 *
 *   {"version": 1, "rules": [{"class": "FieldGreen", "luma": [lo, hi],
 *                             "cb": [lo, hi], "cr": [lo, hi]}, ...]}
 *
 * Rule order is precedence order.
 */
inline std::vector<ColourRule> rules_from_json(const nlohmann::json& doc) {
  auto field_error = [](const std::string& field, const std::string& why) {
    return RulesError("rules: field '" + field + "': " + why);
  };
  if (!doc.is_object()) throw RulesError("rules: document must be an object");
  if (!doc.contains("version") || !doc["version"].is_number_integer() || doc["version"] != 1)
    throw field_error("version", "must be 1");
  if (!doc.contains("rules") || !doc["rules"].is_array()) throw field_error("rules", "must be an array");
  std::vector<ColourRule> rules;
  for (std::size_t i = 0; i < doc["rules"].size(); ++i) {
    const auto& r = doc["rules"][i];
    const std::string prefix = "rules[" + std::to_string(i) + "].";
    if (!r.is_object()) throw field_error("rules[" + std::to_string(i) + "]", "must be an object");
    ColourRule rule;
    if (!r.contains("class") || !r["class"].is_string()) throw field_error(prefix + "class", "missing");
    const auto c = parse_colour(r["class"].get<std::string>());
    if (!c) throw field_error(prefix + "class", "unknown colour class '" + r["class"].get<std::string>() + "'");
    rule.colour = *c;
    auto range = [&](const char* key) {
      if (!r.contains(key)) return ChannelRange{};
      const auto& v = r[key];
      if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
        throw field_error(prefix + key, "must be [min, max]");
      ChannelRange cr{v[0].get<int>(), v[1].get<int>()};
      if (cr.min < 0 || cr.max > 255) throw field_error(prefix + key, "values must lie in [0, 255]");
      if (cr.min > cr.max) throw field_error(prefix + key, "min exceeds max");
      return cr;
    };
    rule.luma = range("luma");
    rule.cb = range("cb");
    rule.cr = range("cr");
    rules.push_back(rule);
  }
  return rules;
}

inline nlohmann::json rules_to_json(const std::vector<ColourRule>& rules) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ColourRule& r : rules)
    arr.push_back({{"class", std::string(colour_name(r.colour))},
                   {"luma", {r.luma.min, r.luma.max}},
                   {"cb", {r.cb.min, r.cb.max}},
                   {"cr", {r.cr.min, r.cr.max}}});
  return {{"version", 1}, {"rules", arr}};
}

inline std::vector<ColourRule> read_rules_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw RulesError("cannot open rules file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw RulesError("rules file " + path.string() + " is not valid JSON: " + e.what());
  }
  return rules_from_json(doc);
}

}  // namespace fv::platform
