#include "dmab/output.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <stdexcept>

#include "dmab/config.hpp"

#ifndef DMAB_VERSION
#define DMAB_VERSION "0.0.0"
#endif

namespace dmab {

const char* const kVersion = DMAB_VERSION;

std::string format_real(double x) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw std::runtime_error("format_real: conversion failed");
  return std::string(buf.data(), end);
}

namespace {
std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

void close_checked(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw std::runtime_error("I/O error while writing '" + path.string() + "'");
}
}  // namespace

void write_regret_csv(const ExperimentResult& result, const std::filesystem::path& path,
                      std::size_t every) {
  if (every == 0) every = 1;
  auto out = open_for_write(path);
  out << "trial,agent,round,cumulative_regret\n";
  std::string line;
  for (const auto& trial : result.trials) {
    for (std::size_t a = 0; a < trial.normal_agents.size(); ++a) {
      const auto& curve = trial.agent_regret[a];
      const std::string prefix =
          std::to_string(trial.trial) + ',' + std::to_string(trial.normal_agents[a]) + ',';
      for (std::size_t t = 1; t <= curve.size(); ++t) {
        if (t % every != 0 && t != curve.size()) continue;
        line = prefix;
        line += std::to_string(t);
        line += ',';
        line += format_real(curve[t - 1]);
        line += '\n';
        out << line;
      }
    }
  }
  close_checked(out, path);
}

void write_summary_csv(const ExperimentResult& result, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << "round,mean_regret,std_regret,comm_cost\n";
  for (std::size_t t = 0; t < result.regret.mean.size(); ++t) {
    out << (t + 1) << ',' << format_real(result.regret.mean[t]) << ','
        << format_real(result.regret.stddev[t]) << ',' << format_real(result.comm_cost[t]) << '\n';
  }
  close_checked(out, path);
}

void write_manifest(const ExperimentConfig& cfg, const std::filesystem::path& path) {
  auto doc = to_json(cfg);
  doc["manifest"] = {{"tool", "demabar"}, {"version", kVersion}, {"seed", cfg.seed}};
  auto out = open_for_write(path);
  out << doc.dump(2) << '\n';
  close_checked(out, path);
}

}  // namespace dmab
