#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dmab/round_log.hpp"

namespace dmab {

/// Realized pseudo-regret of agent i over rounds 1..t: the sum of the gaps of
/// the arms it pulled.
double pseudo_regret(const RoundLog& log, AgentId i, std::size_t t);

/// Same quantity through pull tallies: sum_k gap_k * n_k(t).
double pseudo_regret_from_tallies(const RoundLog& log, AgentId i, std::size_t t);

/// Cumulative pseudo-regret of agent i at every round 1..T.
std::vector<double> regret_curve(const RoundLog& log, AgentId i);

/// Total broadcasts over the whole trial.
std::uint64_t comm_cost(const RoundLog& log);

/// Cumulative broadcasts at every round 1..T.
std::vector<std::uint64_t> comm_cost_curve(const RoundLog& log);

struct RegretCurve {
  std::vector<double> mean;
  std::vector<double> stddev;  // sample standard deviation; 0 for one trial
  std::size_t trials = 0;
};

/// Pointwise mean and sample standard deviation across equally long curves.
RegretCurve aggregate(std::span<const std::vector<double>> curves);

}  // namespace dmab
