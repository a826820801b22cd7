#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

namespace yardstick {

/// Parses the flat subset of TOML the config files use: `key = value`
/// lines with integers, floats, booleans, double-quoted strings and
/// (possibly multi-line) arrays of those; `#` comments. Tables are rejected.
/// Throws ConfigError naming the line.
nlohmann::json parse_flat_toml(std::string_view text);

/// Loads a `.json` file with the JSON parser and anything else as flat TOML.
/// Throws IoError if the file cannot be read.
nlohmann::json load_config_file(const std::string& path);

}  // namespace yardstick
