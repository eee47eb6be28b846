#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "dmab/engine.hpp"

namespace dmab {

/// Reads a JSON experiment config. Unknown keys, out-of-range values and
/// inconsistent threat models raise ConfigError naming the field. A top-level
/// "manifest" object (as written next to results) is accepted and ignored.
ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_json(const nlohmann::json& doc);

/// Fully resolved config; parse_config_json(to_json(c)) == c.
nlohmann::json to_json(const ExperimentConfig& cfg);

}  // namespace dmab
