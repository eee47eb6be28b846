#include "dmab/environment.hpp"

#include <stdexcept>

namespace dmab {

std::string to_string(RewardFamily family) {
  return family == RewardFamily::Gaussian ? "gaussian" : "bernoulli";
}

RewardFamily reward_family_from_string(const std::string& name) {
  if (name == "gaussian") return RewardFamily::Gaussian;
  if (name == "bernoulli") return RewardFamily::Bernoulli;
  throw std::invalid_argument("unknown reward family '" + name + "'");
}

BanditInstance make_instance(std::vector<double> means, RewardFamily family,
                             double sigma, bool clip) {
  if (means.empty()) throw std::invalid_argument("instance needs at least one arm");
  for (double mu : means) {
    if (!(mu >= 0.0 && mu <= 1.0))
      throw std::invalid_argument("arm means must lie in [0,1]");
  }
  BanditInstance inst;
  inst.means = std::move(means);
  inst.family = family;
  inst.sigma = sigma;
  inst.clip = clip;
  for (ArmId k = 1; k < inst.means.size(); ++k) {
    if (inst.means[k] > inst.means[inst.optimal_arm]) inst.optimal_arm = k;
  }
  const double best = inst.means[inst.optimal_arm];
  inst.gaps.resize(inst.means.size());
  for (ArmId k = 0; k < inst.means.size(); ++k) {
    inst.gaps[k] = best - inst.means[k];
    if (inst.gaps[k] > 0.0 && (!inst.min_gap || inst.gaps[k] < *inst.min_gap))
      inst.min_gap = inst.gaps[k];
  }
  return inst;
}

BanditInstance sample_instance(const InstanceSpec& spec, RngStream& rng) {
  if (!spec.means.empty()) {
    if (spec.means.size() != spec.arms)
      throw std::invalid_argument("instance.means has " + std::to_string(spec.means.size()) +
                                  " entries but instance.arms is " + std::to_string(spec.arms));
    return make_instance(spec.means, spec.family, spec.sigma, spec.clip);
  }
  std::vector<double> means(spec.arms);
  for (double& mu : means) mu = rng.uniform(spec.mean_lo, spec.mean_hi);
  return make_instance(std::move(means), spec.family, spec.sigma, spec.clip);
}

void sample_reward_vectors(const BanditInstance& instance, RngStream& rng,
                           RewardMatrix& out) {
  const std::size_t K = instance.arm_count();
  if (out.arms() != K) throw std::invalid_argument("reward matrix arm count mismatch");
  for (std::size_t i = 0; i < out.agents(); ++i) {
    for (ArmId k = 0; k < K; ++k) {
      double r;
      if (instance.family == RewardFamily::Bernoulli) {
        r = rng.bernoulli(instance.means[k]) ? 1.0 : 0.0;
      } else {
        r = rng.normal(instance.means[k], instance.sigma);
        if (instance.clip) r = clip01(r);
      }
      out(i, k) = r;
    }
  }
}

}  // namespace dmab
