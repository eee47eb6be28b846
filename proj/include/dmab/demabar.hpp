#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dmab/environment.hpp"
#include "dmab/message.hpp"
#include "dmab/rng.hpp"
#include "dmab/topology.hpp"

namespace dmab {

struct DemabarParams {
  double alpha = 1.0 / 3.0;  // tolerated fraction of bad neighbors, in [0, 0.5)
  std::size_t w = 1;         // collaboration distance
  double lambda = 1.0;       // exploration constant
  bool require_unit_rewards = true;
};

/// lambda = 2^9 ln(2VT), the constant the regret analysis is stated for.
double theory_lambda(std::size_t agents, std::size_t horizon);
/// lambda = 5 ln(4V^2T), the smaller constant used for experiments.
double experiment_lambda(std::size_t agents, std::size_t horizon);

/// The graph sizes one agent needs: |N_w(i)|, v_i^w and v_min^w.
struct NeighborhoodView {
  std::size_t hood_size = 1;
  std::size_t local_min = 1;
  std::size_t global_min = 1;

  static NeighborhoodView of(const NeighborhoodStats& stats, AgentId i) {
    return {stats.sizes[i], stats.local_min[i], stats.global_min};
  }
};

/// N_m = ceil(lambda K 4^{m-1} / ((1 - 2 alpha) v_min)). Identical for every
/// agent, which keeps epochs synchronized without coordination.
std::uint64_t epoch_length(const DemabarParams& params, std::size_t arms, std::size_t epoch,
                           std::size_t global_min);

/// (1 - 2 alpha) |N|: the number of reports that must survive filtering.
double quorum(double alpha, std::size_t hood_size);

/// Number of values trimmed from each end when `available` reports remain.
std::size_t trim_count(std::size_t available, double alpha, std::size_t hood_size);

/// Mean of `values` after dropping the `f` largest and `f` smallest. Not capped.
double trimmed_mean(std::vector<double> values, std::size_t f);

struct ArmFilterOutcome {
  double estimate = 0.0;     // capped at 1
  double raw_estimate = 0.0; // before the cap
  double threshold = 0.0;    // n^m_{i,k}, after a possible reset
  bool reset = false;        // too few reports passed the count check
  std::size_t kept = 0;      // reports averaged after trimming
  std::size_t trimmed = 0;   // f
};

/// Robust aggregation of one arm: count check, optional reset, trimmed mean.
ArmFilterOutcome filter_arm(std::span<const EpochMessage> inbox, ArmId k, double prev_gap,
                            double alpha, double lambda, std::size_t hood_size);

struct FilterResult {
  std::vector<double> estimates;  // r^m_{i,k}
  std::vector<ArmFilterOutcome> arms;
  std::size_t resets() const;
};

/// Runs filter_arm for every arm. `inbox` should hold one message per member
/// of the neighborhood, the agent's own included.
FilterResult filter_epoch(std::span<const EpochMessage> inbox, std::span<const double> prev_gaps,
                          double alpha, double lambda, std::size_t hood_size);

/// One agent running the epoch-based robust elimination algorithm.
///
/// Lifecycle per epoch m: begin_epoch(m); N_m sampling rounds (act/observe
/// record rewards); w communication rounds pulling the fallback arm with
/// rewards discarded; filter over the gathered messages; update_gaps().
class DemabarAgent {
 public:
  DemabarAgent(AgentId id, std::size_t arms, DemabarParams params, NeighborhoodView view);

  void begin_epoch(std::size_t epoch);

  /// Draw from the current sampling distribution.
  ArmId sample_arm(RngStream& rng) const;
  void record_observation(ArmId arm, double reward);

  /// Clock-aware round: sample during the first N_m rounds, then pull the
  /// fallback arm through the communication rounds.
  ArmId act(RngStream& rng) const;
  void observe(ArmId arm, double reward);
  bool communicating() const { return rounds_in_epoch_ >= epoch_length_; }
  bool epoch_finished() const { return rounds_in_epoch_ >= epoch_length_ + params_.w; }

  EpochMessage make_message() const;
  FilterResult filter(std::span<const EpochMessage> inbox) const;
  void update_gaps(std::span<const double> estimates);

  AgentId id() const { return id_; }
  std::size_t epoch() const { return epoch_; }
  std::uint64_t epoch_length() const { return epoch_length_; }
  std::uint64_t rounds_in_epoch() const { return rounds_in_epoch_; }
  ArmId fallback_arm() const { return fallback_; }
  const DemabarParams& params() const { return params_; }
  const NeighborhoodView& view() const { return view_; }
  std::span<const double> gap_estimates() const { return gaps_; }
  std::span<const double> planned() const { return planned_; }
  std::span<const double> sampling() const { return sampling_; }
  std::span<const double> reward_sums() const { return sums_; }
  /// Per-arm cap lambda 4^{m-1} / ((1 - 2 alpha) v_i^w) of the current epoch.
  double count_cap() const;

 private:
  AgentId id_;
  std::size_t arms_;
  DemabarParams params_;
  NeighborhoodView view_;

  std::size_t epoch_ = 0;
  std::uint64_t epoch_length_ = 0;
  std::uint64_t rounds_in_epoch_ = 0;
  ArmId fallback_ = 0;
  std::vector<double> gaps_;    // estimates carried into the current epoch
  std::vector<double> scores_;  // r_k - prev_gap_k / 8 from the last update
  bool have_scores_ = false;
  std::vector<double> planned_;
  std::vector<double> sampling_;
  std::vector<double> sums_;
};

/// Synchronous flooding of epoch messages over the graph, one hop per round.
/// Each round every agent broadcasts its own message plus whatever it first
/// heard in the previous round; duplicates by origin are dropped.
class FloodRelay {
 public:
  /// Rewrites a message sent by `sender` to `recipient` (Byzantine forging).
  using Forge = std::function<EpochMessage(AgentId sender, AgentId recipient,
                                           const EpochMessage& message)>;

  FloodRelay(const Topology& topology, std::vector<EpochMessage> own_messages,
             std::size_t hops);

  void set_forger(std::vector<bool> forging_senders, Forge forge);

  /// Runs one communication round; returns the number of broadcasts.
  std::size_t step();

  std::size_t rounds_done() const { return rounds_; }
  /// Messages held by `agent`, ordered by origin.
  std::vector<EpochMessage> inbox(AgentId agent) const;

 private:
  const Topology* topology_;
  std::size_t hops_;
  std::size_t rounds_ = 0;
  std::vector<EpochMessage> own_;
  std::vector<std::vector<EpochMessage>> held_;  // [agent][origin]
  std::vector<std::vector<bool>> has_;
  std::vector<std::vector<AgentId>> fresh_;      // origins first heard last round
  std::vector<bool> forging_;
  Forge forge_;
};

}  // namespace dmab
