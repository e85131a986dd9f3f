#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mediabias/experiment.hpp"

namespace mediabias {

// Value of a flat TOML document: strings, integers, floats, booleans and
// single-level arrays of strings.
using TomlValue = std::variant<std::string, std::int64_t, double, bool, std::vector<std::string>>;

// Parses `key = value` lines with '#' comments. Tables, inline tables and
// dotted keys are rejected since the format is flat. Throws ParseError.
std::map<std::string, TomlValue> parse_flat_toml(std::string_view text);

struct RunConfig {
  std::filesystem::path channels;
  std::filesystem::path videos;
  std::filesystem::path features;
  std::optional<std::filesystem::path> episodes;
  std::filesystem::path out = "out";
  std::vector<std::string> experiments;
  RunOptions options;
};

// Relative paths resolve against base_dir. Unknown keys, wrong value types
// and missing input files throw ConfigError.
RunConfig run_config_from_toml(std::string_view text, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& file);

}  // namespace mediabias
