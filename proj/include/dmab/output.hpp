#pragma once

#include <filesystem>
#include <string>

#include "dmab/engine.hpp"

namespace dmab {

/// Shortest decimal form that reads back to the same double.
std::string format_real(double x);

/// Columns: trial,agent,round,cumulative_regret. One row per (trial, normal
/// agent, round); with every > 1 only rounds divisible by `every` and round T.
void write_regret_csv(const ExperimentResult& result, const std::filesystem::path& path,
                      std::size_t every = 1);

/// Columns: round,mean_regret,std_regret,comm_cost. One row per round 1..T.
void write_summary_csv(const ExperimentResult& result, const std::filesystem::path& path);

/// Resolved config plus a "manifest" block; readable by parse_config.
void write_manifest(const ExperimentConfig& cfg, const std::filesystem::path& path);

extern const char* const kVersion;

}  // namespace dmab
