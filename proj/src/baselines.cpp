#include "dmab/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dmab {

UcbPolicy::UcbPolicy(std::size_t arms, double coef)
    : coef_(coef), counts_(arms, 0), sums_(arms, 0.0) {
  if (arms == 0) throw std::invalid_argument("UCB needs at least one arm");
}

double UcbPolicy::index(ArmId arm, std::size_t t) const {
  const double n = static_cast<double>(counts_[arm]);
  return sums_[arm] / n + std::sqrt(coef_ * std::log(static_cast<double>(t)) / n);
}

ArmId UcbPolicy::select(std::size_t t, RngStream& /*rng*/) {
  for (ArmId k = 0; k < counts_.size(); ++k) {
    if (counts_[k] == 0) return k;
  }
  ArmId best = 0;
  double best_index = index(0, t);
  for (ArmId k = 1; k < counts_.size(); ++k) {
    const double v = index(k, t);
    if (v > best_index) {
      best = k;
      best_index = v;
    }
  }
  return best;
}

void UcbPolicy::observe(ArmId arm, double reward) {
  ++counts_.at(arm);
  sums_[arm] += reward;
}

const std::vector<std::string>& reserved_baselines() {
  static const std::vector<std::string> names{"draa", "ma_barbat", "resilient_ucb", "ind_ftrl"};
  return names;
}

std::unique_ptr<IndependentPolicy> make_independent_policy(const std::string& name,
                                                           std::size_t arms,
                                                           const BaselineParams& params) {
  if (name == "ind_ucb") return std::make_unique<UcbPolicy>(arms, params.ucb_coef);
  const auto& reserved = reserved_baselines();
  if (std::find(reserved.begin(), reserved.end(), name) != reserved.end())
    throw std::invalid_argument("baseline '" + name + "' is a reserved slot with no implementation");
  throw std::invalid_argument("unknown baseline '" + name + "'");
}

DemabarParams ind_barbar_params(double lambda) {
  DemabarParams p;
  p.alpha = 0.0;
  p.w = 0;
  p.lambda = lambda;
  return p;
}

DemabarAgent ind_barbar_agent(AgentId id, std::size_t arms, double lambda) {
  return DemabarAgent(id, arms, ind_barbar_params(lambda), NeighborhoodView{1, 1, 1});
}

}  // namespace dmab
