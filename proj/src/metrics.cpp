#include "dmab/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace dmab {

double pseudo_regret(const RoundLog& log, AgentId i, std::size_t t) {
  if (t > log.horizon) throw std::out_of_range("pseudo_regret: round beyond horizon");
  double total = 0.0;
  for (std::size_t s = 1; s <= t; ++s) total += log.instance.gaps[log.arm(s, i)];
  return total;
}

double pseudo_regret_from_tallies(const RoundLog& log, AgentId i, std::size_t t) {
  if (t > log.horizon) throw std::out_of_range("pseudo_regret: round beyond horizon");
  std::vector<std::uint64_t> tallies(log.arms, 0);
  for (std::size_t s = 1; s <= t; ++s) ++tallies[log.arm(s, i)];
  double total = 0.0;
  for (ArmId k = 0; k < log.arms; ++k)
    total += log.instance.gaps[k] * static_cast<double>(tallies[k]);
  return total;
}

std::vector<double> regret_curve(const RoundLog& log, AgentId i) {
  std::vector<double> curve(log.horizon);
  double total = 0.0;
  for (std::size_t t = 1; t <= log.horizon; ++t) {
    total += log.instance.gaps[log.arm(t, i)];
    curve[t - 1] = total;
  }
  return curve;
}

std::uint64_t comm_cost(const RoundLog& log) {
  std::uint64_t total = 0;
  for (auto b : log.broadcasts) total += b;
  return total;
}

std::vector<std::uint64_t> comm_cost_curve(const RoundLog& log) {
  std::vector<std::uint64_t> curve(log.horizon);
  std::uint64_t total = 0;
  for (std::size_t t = 0; t < log.horizon; ++t) {
    total += log.broadcasts[t];
    curve[t] = total;
  }
  return curve;
}

RegretCurve aggregate(std::span<const std::vector<double>> curves) {
  if (curves.empty()) throw std::invalid_argument("aggregate: no curves");
  const std::size_t n = curves.front().size();
  for (const auto& c : curves)
    if (c.size() != n) throw std::invalid_argument("aggregate: curves differ in length");
  RegretCurve out;
  out.trials = curves.size();
  out.mean.assign(n, 0.0);
  out.stddev.assign(n, 0.0);
  const double count = static_cast<double>(curves.size());
  for (std::size_t t = 0; t < n; ++t) {
    double sum = 0.0;
    for (const auto& c : curves) sum += c[t];
    const double mean = sum / count;
    out.mean[t] = mean;
    if (curves.size() > 1) {
      double ss = 0.0;
      for (const auto& c : curves) ss += (c[t] - mean) * (c[t] - mean);
      out.stddev[t] = std::sqrt(ss / (count - 1.0));
    }
  }
  return out;
}

}  // namespace dmab
