#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dmab/rng.hpp"

namespace dmab {

using ArmId = std::size_t;

enum class RewardFamily { Gaussian, Bernoulli };

std::string to_string(RewardFamily family);
RewardFamily reward_family_from_string(const std::string& name);

struct InstanceSpec {
  std::size_t arms = 2;
  RewardFamily family = RewardFamily::Gaussian;
  double sigma = 0.01;
  std::vector<double> means;  // empty: draw U(mean_lo, mean_hi) per trial
  double mean_lo = 0.1;
  double mean_hi = 0.9;
  bool clip = true;  // clip Gaussian draws to [0,1]

  bool operator==(const InstanceSpec&) const = default;
};

/// One stochastic K-armed instance shared by all agents of a trial.
struct BanditInstance {
  std::vector<double> means;
  RewardFamily family = RewardFamily::Gaussian;
  double sigma = 0.01;
  bool clip = true;
  ArmId optimal_arm = 0;
  std::vector<double> gaps;
  std::optional<double> min_gap;  // smallest positive gap; empty if all arms tie

  std::size_t arm_count() const { return means.size(); }
  bool degenerate() const { return !min_gap.has_value(); }
  double best_mean() const { return means[optimal_arm]; }
};

/// Builds an instance from explicit means; gaps are derived.
BanditInstance make_instance(std::vector<double> means, RewardFamily family,
                             double sigma, bool clip = true);

/// Explicit means are taken verbatim; otherwise each mean is drawn uniformly.
BanditInstance sample_instance(const InstanceSpec& spec, RngStream& rng);

/// Row-major V x K matrix of per-agent reward vectors for one round.
class RewardMatrix {
 public:
  RewardMatrix() = default;
  RewardMatrix(std::size_t agents, std::size_t arms)
      : agents_(agents), arms_(arms), values_(agents * arms, 0.0) {}

  std::size_t agents() const { return agents_; }
  std::size_t arms() const { return arms_; }
  double& operator()(std::size_t i, ArmId k) { return values_[i * arms_ + k]; }
  double operator()(std::size_t i, ArmId k) const { return values_[i * arms_ + k]; }
  std::span<double> row(std::size_t i) { return {values_.data() + i * arms_, arms_}; }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * arms_, arms_};
  }

  bool operator==(const RewardMatrix&) const = default;

 private:
  std::size_t agents_ = 0;
  std::size_t arms_ = 0;
  std::vector<double> values_;
};

/// Fills `out` with a fresh reward vector for every agent. Entries are drawn in
/// row-major order from `rng`, so the matrix depends only on the stream state.
void sample_reward_vectors(const BanditInstance& instance, RngStream& rng,
                           RewardMatrix& out);

inline double clip01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

}  // namespace dmab
