#pragma once

#include <string>
#include <vector>

#include "dmab/environment.hpp"
#include "dmab/message.hpp"
#include "dmab/rng.hpp"
#include "dmab/topology.hpp"

namespace dmab {

/// Budget accounting for reward corruption. The charge of a round is
/// sum_i max_k |corrupted(i,k) - original(i,k)|.
struct CorruptionLedger {
  double budget = 0.0;
  double spent = 0.0;
  std::vector<bool> attackable;  // per agent

  CorruptionLedger() = default;
  CorruptionLedger(double budget_, std::vector<bool> attackable_)
      : budget(budget_), attackable(std::move(attackable_)) {}

  double remaining() const { return budget > spent ? budget - spent : 0.0; }
  bool exhausted() const { return !(spent < budget); }
};

/// Applies the proposed corruption `desired` to `rewards` subject to the
/// ledger: rows of non-attackable agents stay untouched, proposals are clipped
/// to [0,1], and the row that would overrun the budget is scaled toward the
/// original so that exactly the remaining budget is spent. Returns the charge
/// per agent.
std::vector<double> corrupt(RewardMatrix& rewards, const RewardMatrix& desired,
                            CorruptionLedger& ledger);

enum class AttackTrigger {
  Always,      // zero every non-target entry
  RewardIsOne  // zero a non-target entry only when it equals 1
};

std::string to_string(AttackTrigger trigger);
AttackTrigger attack_trigger_from_string(const std::string& name);

/// Push agents toward target arms (mean <= threshold) by zeroing the rewards
/// of all other arms.
struct TargetedAttack {
  double target_threshold = 0.5;
  AttackTrigger trigger = AttackTrigger::Always;

  bool is_target(const BanditInstance& inst, ArmId k) const {
    return inst.means[k] <= target_threshold;
  }
  bool operator==(const TargetedAttack&) const = default;
};

std::vector<double> targeted_attack_policy(const BanditInstance& inst,
                                           RewardMatrix& rewards,
                                           CorruptionLedger& ledger,
                                           const TargetedAttack& attack);

enum class ByzantineAttack { Adaptive, Gaussian };

std::string to_string(ByzantineAttack attack);
ByzantineAttack byzantine_attack_from_string(const std::string& name);

struct ByzantineSpec {
  std::vector<bool> byzantine;  // per agent
  ByzantineAttack attack = ByzantineAttack::Adaptive;
  double noise = 0.001;         // variance unless noise_is_std
  bool noise_is_std = false;
  std::vector<std::vector<double>> biases;  // per agent, per arm; empty for normal agents

  bool is_byzantine(AgentId i) const { return i < byzantine.size() && byzantine[i]; }
  double noise_stddev() const;
};

/// Builds a spec for the listed agents, drawing the Gaussian-attack biases
/// uniformly from (0,1) on each agent's own stream.
ByzantineSpec make_byzantine_spec(const std::vector<AgentId>& agents, std::size_t node_count,
                                  std::size_t arms, ByzantineAttack attack,
                                  std::uint64_t root_seed, std::uint64_t trial);

/// What a Byzantine sender transmits to `recipient`.
///  - adaptive: every arm reports 1 - mu_k with the count inflated to `count_cap`.
///  - gaussian: every arm's average is shifted by N(bias, noise), drawn per
///    recipient; counts are left as in `honest`.
EpochMessage byzantine_message(const ByzantineSpec& spec, const EpochMessage& honest,
                               AgentId recipient, const BanditInstance& inst,
                               double count_cap, RngStream& rng);

/// Byzantine agents pull uniformly at random.
ArmId byzantine_arm_choice(std::size_t arms, RngStream& rng);

/// Human-readable warnings for normal agents whose 1-hop neighborhood holds
/// more than an alpha fraction of Byzantine agents.
std::vector<std::string> check_byzantine_fraction(const ByzantineSpec& spec,
                                                  const NeighborhoodStats& one_hop,
                                                  double alpha);

}  // namespace dmab
