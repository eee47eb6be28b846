#pragma once

#include <cstdint>
#include <vector>

#include "dmab/environment.hpp"
#include "dmab/topology.hpp"

namespace dmab {

/// Counters for the runtime checks the engine performs every epoch.
struct InvariantReport {
  std::size_t checks = 0;
  std::size_t feasibility = 0;   // sum of planned pulls != N_m, or a negative plan
  std::size_t distribution = 0;  // sampling distribution not a probability vector
  std::size_t synchrony = 0;     // an agent's epoch clock disagrees with the shared one
  std::size_t gap_floor = 0;     // a gap estimate below 2^{-(m-1)}
  std::size_t ledger = 0;        // corruption spent decreased or exceeded the budget

  std::size_t violations() const {
    return feasibility + distribution + synchrony + gap_floor + ledger;
  }
  InvariantReport& operator+=(const InvariantReport& o);
};

/// Snapshot taken when an epoch's filter and gap update have run.
struct EpochRecord {
  std::size_t epoch = 0;
  std::uint64_t first_round = 0;  // 1-based
  std::uint64_t length = 0;       // N_m, sampling rounds only
  std::size_t comm_rounds = 0;
  std::size_t filter_resets = 0;
  std::vector<double> gaps;       // V x K gap estimates after the update; NaN for Byzantine agents
};

/// Everything that happened in one trial, indexed by (round, agent).
struct RoundLog {
  std::size_t agents = 0;
  std::size_t arms = 0;
  std::size_t horizon = 0;
  BanditInstance instance;
  std::vector<bool> byzantine;
  std::vector<ArmId> pulled;          // T x V
  std::vector<double> observed;       // T x V
  std::vector<double> corruption;     // T x V, per-agent charge of that round
  std::vector<std::uint32_t> broadcasts;  // T
  std::vector<EpochRecord> epochs;    // completed epochs only
  double corruption_spent = 0.0;
  InvariantReport invariants;

  RoundLog() = default;
  RoundLog(std::size_t agents_, std::size_t arms_, std::size_t horizon_);

  std::size_t slot(std::size_t t, AgentId i) const { return (t - 1) * agents + i; }
  ArmId arm(std::size_t t, AgentId i) const { return pulled[slot(t, i)]; }
  bool is_byzantine(AgentId i) const { return i < byzantine.size() && byzantine[i]; }
  std::vector<AgentId> normal_agents() const;
  std::size_t completed_epochs() const { return epochs.size(); }
};

}  // namespace dmab
