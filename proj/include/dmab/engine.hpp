#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmab/adversary.hpp"
#include "dmab/environment.hpp"
#include "dmab/metrics.hpp"
#include "dmab/round_log.hpp"
#include "dmab/topology.hpp"

namespace dmab {

/// Rejection of an invalid configuration; `field()` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class LambdaRule { Experiment, Theory, Fixed };

std::string to_string(LambdaRule rule);

struct AlgorithmConfig {
  std::string name = "demabar";  // demabar | ind_barbar | ind_ucb
  double alpha = 1.0 / 3.0;
  std::size_t w = 1;
  LambdaRule lambda_rule = LambdaRule::Experiment;
  double lambda = 0.0;  // used when lambda_rule == Fixed
  double ucb_coef = 1.5;

  bool operator==(const AlgorithmConfig&) const = default;
};

enum class ThreatModel { None, Corruption, Byzantine };

std::string to_string(ThreatModel model);

struct ThreatConfig {
  ThreatModel model = ThreatModel::None;
  std::vector<AgentId> agents;  // corrupted or Byzantine agents
  bool all_agents = false;      // corruption: attack every agent
  // corruption
  double budget = 0.0;
  TargetedAttack attack;
  // byzantine
  ByzantineAttack byzantine_attack = ByzantineAttack::Adaptive;
  double noise = 0.001;
  bool noise_is_std = false;

  bool operator==(const ThreatConfig&) const = default;
};

struct ExperimentConfig {
  GraphSpec graph;
  InstanceSpec instance;
  AlgorithmConfig algorithm;
  ThreatConfig threat;
  std::size_t horizon = 1000;
  std::size_t trials = 1;
  std::uint64_t seed = 0;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Throws ConfigError on the first inconsistency. Returns warnings that do not
/// block a run (e.g. Byzantine fraction above alpha for some agent).
std::vector<std::string> validate(const ExperimentConfig& cfg);

/// The exploration constant a config resolves to.
double resolve_lambda(const ExperimentConfig& cfg, std::size_t agents);

/// Test hook: the order agents are visited inside each phase of a round.
struct TrialOptions {
  std::vector<AgentId> agent_order;  // empty: ascending ids
};

/// Plays one trial round by round: rewards, corruption, pulls, observations,
/// communication, then filter and gap update at epoch boundaries.
RoundLog run_trial(const ExperimentConfig& cfg, std::size_t trial,
                   const TrialOptions& options = {});

/// Reduced view of one trial kept by run_experiment.
struct TrialSummary {
  std::size_t trial = 0;
  std::vector<AgentId> normal_agents;
  std::vector<std::vector<double>> agent_regret;  // per normal agent, rounds 1..T
  std::vector<double> mean_regret;                // average over normal agents
  std::vector<std::uint64_t> comm_cost;           // cumulative broadcasts
  std::vector<EpochRecord> epochs;
  InvariantReport invariants;
  double corruption_spent = 0.0;
  BanditInstance instance;

  bool operator==(const TrialSummary& o) const;
};

TrialSummary summarize(const RoundLog& log, std::size_t trial);

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<TrialSummary> trials;
  RegretCurve regret;               // across trials of the agent-averaged curve
  std::vector<double> comm_cost;    // trial mean of cumulative broadcasts

  InvariantReport invariants() const;
  double final_mean_regret() const { return regret.mean.back(); }
};

/// Trials run in parallel (OpenMP) over `jobs` threads; 0 uses the runtime
/// default. Results are identical to run_experiment_serial.
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::size_t jobs = 0);

/// Reference implementation: trials one after another.
ExperimentResult run_experiment_serial(const ExperimentConfig& cfg);

}  // namespace dmab
