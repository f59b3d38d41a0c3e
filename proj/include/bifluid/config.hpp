#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bifluid/model.hpp"

namespace bifluid {

struct ConfigEntry {
    std::string key;
    std::string value;
    int line = 0;
};

/// `key = value` lines; `#` starts a comment; blank lines are ignored.
std::vector<ConfigEntry> read_entries(const std::string& text, const std::string& origin = "<config>");

/// Sets one documented key. Throws ConfigError naming the key on unknown keys or bad values.
void apply_entry(RunConfig& cfg, const ConfigEntry& e);

/// Applies entries in order and validates the result.
RunConfig build_config(const std::vector<ConfigEntry>& entries, const std::string& origin = "<config>");

RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
RunConfig parse_config(const std::string& path);

/// Every accepted key, in documentation order.
const std::vector<std::string>& known_keys();

/// Round-trippable config text with every key set.
std::string dump_config(const RunConfig& cfg);

} // namespace bifluid
