#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "diffwave/solver.hpp"

namespace diffwave {

/// Everything a `profile` or `simulate` run needs.
struct RunConfig {
  ScenarioSpec scenario;
  std::string output_dir = "out";
  std::uint64_t seed = 20240601;
  /// Preset the values were expanded from, informational only.
  std::string preset;

  bool operator==(const RunConfig& o) const {
    return scenario == o.scenario && output_dir == o.output_dir && seed == o.seed;
  }
};

/// Every accepted key as "section.key".
const std::vector<std::string>& config_keys();

/// Names accepted by `scenario = ...`.
const std::vector<std::string>& preset_names();

/// Preset scenario by name. Throws ConfigError for unknown names.
RunConfig preset_config(const std::string& name);

/// INI-style document: [section] headers, `key = value` lines, `#` or `;`
/// comments. Two top-level shortcuts are accepted before any section:
/// `closure = m1|gamma|linear` and `scenario = <preset>`. Preset values are
/// applied first and explicit keys override them. Collects every problem
/// and throws one ConfigError listing all of them.
RunConfig parse_config(const std::string& text);

/// Reads and parses a file; IoError if it cannot be read.
RunConfig load_config(const std::string& path);

/// Canonical document with every key spelled out; parses back to an equal
/// config.
std::string serialize_config(const RunConfig& config);

/// Levenshtein distance, used for "did you mean" hints.
std::size_t edit_distance(const std::string& a, const std::string& b);

}  // namespace diffwave
