#pragma once

// Flat `key = value` scenario files with dotted section prefixes.
//
//   scenario = figure8          # preset applied before every other key
//   flocking.r_c = 0.3
//   obstacle.0.x = 10           # any obstacle.* key replaces the preset list
//
// Unknown keys and malformed values raise ConfigError naming the key.

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "bfbelp/scenario.hpp"

namespace bfbelp {

ScenarioConfig parse_config(std::istream& in, const std::string& source = "<config>");
ScenarioConfig parse_config_text(const std::string& text, const std::string& source = "<config>");
/// Reads and parses a file; ConfigError names the path if it cannot be read.
ScenarioConfig load_config(const std::string& path);
std::string read_file(const std::string& path);

/// Emits every key with its current value; parse_config of the result gives
/// back an equal configuration.
std::string config_to_text(const ScenarioConfig& cfg);

/// Ordered list of every recognised key (obstacle keys as obstacle.N.*).
std::vector<std::string> known_config_keys();

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace bfbelp
