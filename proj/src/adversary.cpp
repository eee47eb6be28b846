#include "dmab/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dmab {

namespace {
double row_charge(std::span<const double> original, std::span<const double> corrupted) {
  double charge = 0.0;
  for (std::size_t k = 0; k < original.size(); ++k)
    charge = std::max(charge, std::abs(corrupted[k] - original[k]));
  return charge;
}
}  // namespace

std::vector<double> corrupt(RewardMatrix& rewards, const RewardMatrix& desired,
                            CorruptionLedger& ledger) {
  const std::size_t V = rewards.agents();
  const std::size_t K = rewards.arms();
  if (desired.agents() != V || desired.arms() != K)
    throw std::invalid_argument("corrupt: proposal shape mismatch");
  if (ledger.attackable.size() != V)
    throw std::invalid_argument("corrupt: ledger agent count mismatch");

  std::vector<double> charges(V, 0.0);
  std::vector<double> proposal(K);
  for (std::size_t i = 0; i < V; ++i) {
    if (!ledger.attackable[i]) continue;
    const double remaining = ledger.remaining();
    if (remaining <= 0.0) break;

    const auto original = rewards.row(i);
    for (ArmId k = 0; k < K; ++k) proposal[k] = clip01(desired(i, k));
    double charge = row_charge(original, proposal);
    if (charge == 0.0) continue;

    if (charge > remaining) {
      // Scale the shift so the row costs the remaining budget. Rounding can
      // push the recomputed charge a hair over, so step the scale down.
      double scale = remaining / charge;
      std::vector<double> scaled(K);
      for (;;) {
        for (ArmId k = 0; k < K; ++k)
          scaled[k] = clip01(original[k] + scale * (proposal[k] - original[k]));
        charge = row_charge(original, scaled);
        if (ledger.spent + charge <= ledger.budget) break;
        scale = std::nextafter(scale, 0.0);
      }
      proposal = scaled;
    }
    for (ArmId k = 0; k < K; ++k) rewards(i, k) = proposal[k];
    ledger.spent += charge;
    charges[i] = charge;
  }
  return charges;
}

std::string to_string(AttackTrigger trigger) {
  return trigger == AttackTrigger::Always ? "always" : "reward_is_one";
}

AttackTrigger attack_trigger_from_string(const std::string& name) {
  if (name == "always") return AttackTrigger::Always;
  if (name == "reward_is_one") return AttackTrigger::RewardIsOne;
  throw std::invalid_argument("unknown attack trigger '" + name + "'");
}

std::vector<double> targeted_attack_policy(const BanditInstance& inst,
                                           RewardMatrix& rewards,
                                           CorruptionLedger& ledger,
                                           const TargetedAttack& attack) {
  if (ledger.exhausted()) return std::vector<double>(rewards.agents(), 0.0);
  RewardMatrix desired = rewards;
  for (std::size_t i = 0; i < rewards.agents(); ++i) {
    if (!ledger.attackable[i]) continue;
    for (ArmId k = 0; k < rewards.arms(); ++k) {
      if (attack.is_target(inst, k)) continue;
      if (attack.trigger == AttackTrigger::RewardIsOne && rewards(i, k) != 1.0) continue;
      desired(i, k) = 0.0;
    }
  }
  return corrupt(rewards, desired, ledger);
}

std::string to_string(ByzantineAttack attack) {
  return attack == ByzantineAttack::Adaptive ? "adaptive" : "gaussian";
}

ByzantineAttack byzantine_attack_from_string(const std::string& name) {
  if (name == "adaptive") return ByzantineAttack::Adaptive;
  if (name == "gaussian") return ByzantineAttack::Gaussian;
  throw std::invalid_argument("unknown Byzantine attack '" + name + "'");
}

double ByzantineSpec::noise_stddev() const {
  return noise_is_std ? noise : std::sqrt(noise);
}

ByzantineSpec make_byzantine_spec(const std::vector<AgentId>& agents, std::size_t node_count,
                                  std::size_t arms, ByzantineAttack attack,
                                  std::uint64_t root_seed, std::uint64_t trial) {
  ByzantineSpec spec;
  spec.attack = attack;
  spec.byzantine.assign(node_count, false);
  spec.biases.assign(node_count, {});
  for (AgentId a : agents) {
    if (a >= node_count)
      throw std::invalid_argument("Byzantine agent " + std::to_string(a) + " is not a node");
    spec.byzantine[a] = true;
    RngStream rng(root_seed, trial, StreamRole::ByzantineBias, a);
    spec.biases[a].resize(arms);
    for (double& b : spec.biases[a]) b = rng.uniform_open01();
  }
  return spec;
}

EpochMessage byzantine_message(const ByzantineSpec& spec, const EpochMessage& honest,
                               AgentId /*recipient*/, const BanditInstance& inst,
                               double count_cap, RngStream& rng) {
  EpochMessage forged = honest;
  const std::size_t K = honest.sums.size();
  if (spec.attack == ByzantineAttack::Adaptive) {
    for (ArmId k = 0; k < K; ++k) {
      forged.counts[k] = count_cap;
      forged.sums[k] = (1.0 - inst.means[k]) * count_cap;
    }
    return forged;
  }
  const auto& bias = spec.biases.at(honest.origin);
  const double stddev = spec.noise_stddev();
  for (ArmId k = 0; k < K; ++k) {
    const double offset = stddev > 0.0 ? rng.normal(bias[k], stddev) : bias[k];
    forged.sums[k] = (honest.average(k) + offset) * honest.counts[k];
  }
  return forged;
}

ArmId byzantine_arm_choice(std::size_t arms, RngStream& rng) { return rng.index(arms); }

std::vector<std::string> check_byzantine_fraction(const ByzantineSpec& spec,
                                                  const NeighborhoodStats& one_hop,
                                                  double alpha) {
  std::vector<std::string> warnings;
  for (AgentId i = 0; i < one_hop.neighborhoods.size(); ++i) {
    if (spec.is_byzantine(i)) continue;
    std::size_t bad = 0;
    for (AgentId j : one_hop.neighborhoods[i]) bad += spec.is_byzantine(j) ? 1 : 0;
    if (static_cast<double>(bad) > alpha * static_cast<double>(one_hop.sizes[i])) {
      warnings.push_back("agent " + std::to_string(i) + " has " + std::to_string(bad) +
                         " Byzantine agents among " + std::to_string(one_hop.sizes[i]) +
                         " 1-hop neighbors, above alpha=" + std::to_string(alpha));
    }
  }
  return warnings;
}

}  // namespace dmab
