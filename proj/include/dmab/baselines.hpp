#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dmab/demabar.hpp"
#include "dmab/environment.hpp"
#include "dmab/rng.hpp"

namespace dmab {

/// A per-agent algorithm that never communicates.
class IndependentPolicy {
 public:
  virtual ~IndependentPolicy() = default;
  /// Arm to pull at round t (1-based).
  virtual ArmId select(std::size_t t, RngStream& rng) = 0;
  virtual void observe(ArmId arm, double reward) = 0;
  virtual std::string name() const = 0;
};

/// UCB1 with index mean + sqrt(coef ln t / count); ties go to the lowest arm.
class UcbPolicy final : public IndependentPolicy {
 public:
  explicit UcbPolicy(std::size_t arms, double coef = 1.5);

  ArmId select(std::size_t t, RngStream& rng) override;
  void observe(ArmId arm, double reward) override;
  std::string name() const override { return "ind_ucb"; }

  double index(ArmId arm, std::size_t t) const;
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  const std::vector<double>& sums() const { return sums_; }

 private:
  double coef_;
  std::vector<std::uint64_t> counts_;
  std::vector<double> sums_;
};

/// Baselines whose algorithms are published elsewhere. The names are reserved
/// so configs and result files can refer to them; constructing one throws.
const std::vector<std::string>& reserved_baselines();

struct BaselineParams {
  double ucb_coef = 1.5;
};

/// Factory for IndependentPolicy by name ("ind_ucb").
std::unique_ptr<IndependentPolicy> make_independent_policy(const std::string& name,
                                                           std::size_t arms,
                                                           const BaselineParams& params);

/// Parameters that reduce the cooperative algorithm to a lone agent.
DemabarParams ind_barbar_params(double lambda);

/// A cooperative agent that only ever sees itself: alpha = 0, w = 0, |N| = 1.
DemabarAgent ind_barbar_agent(AgentId id, std::size_t arms, double lambda);

}  // namespace dmab
