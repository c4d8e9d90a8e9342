#pragma once

#include <CLI11.hpp>
#include <json.hpp>
#include <algorithm>
#include <cstdio>
#include <string>

// Reads flat JSON objects ({"alpha": 60, "eta": [1, 0.8]}) as CLI11 config.
// Top-level keys apply to the active subcommand; an object keyed by a
// subcommand name applies to that subcommand. Arrays become comma lists.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(std::string active) : active_(std::move(active)) {}

  std::string to_config(const CLI::App*, bool, bool, std::string) const override {
    return "{}\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(input);
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError("config file is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : doc.items()) {
      if (value.is_object()) {
        for (const auto& [k, v] : value.items()) items.push_back(item({key}, k, v));
      } else if (!active_.empty()) {
        items.push_back(item({active_}, key, value));
      }
    }
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
      return buf;
    }
    throw CLI::ConversionError("unsupported config value " + v.dump());
  }

  static CLI::ConfigItem item(std::vector<std::string> parents, std::string name,
                              const nlohmann::json& v) {
    std::replace(name.begin(), name.end(), '_', '-');
    CLI::ConfigItem it;
    it.parents = std::move(parents);
    it.name = name;
    if (v.is_array()) {
      std::string joined;
      for (std::size_t i = 0; i < v.size(); ++i) joined += (i ? "," : "") + scalar(v[i]);
      it.inputs = {joined};
    } else {
      it.inputs = {scalar(v)};
    }
    return it;
  }

  std::string active_;
};
