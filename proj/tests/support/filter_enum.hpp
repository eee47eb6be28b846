#pragma once

// Exhaustive robustness check for the per-arm filter: every placement of up to
// f bad reports among honest ones, over value grids for both.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "dmab/demabar.hpp"

namespace dmab::testing {

struct FilterEnumResult {
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  double worst_low = 1e300;
  double worst_high = -1e300;
};

struct FilterEnumGrid {
  std::vector<double> honest{0.2, 0.5, 0.8};
  std::vector<double> bad{-10.0, -0.5, 0.2, 0.8, 1.5, 10.0};
  double lo = 0.2;
  double hi = 0.8;
};

inline FilterEnumResult enumerate_filter(std::size_t hood, double alpha,
                                         const FilterEnumGrid& grid = {}) {
  // Everyone honest reports a count well above the threshold; a bad report may
  // also carry a count of zero so that it is dropped by the count check.
  constexpr double lambda = 1.0, prev_gap = 1.0;
  const double threshold = lambda / quorum(alpha, hood);
  const double good_count = 2.0 * threshold;

  FilterEnumResult res;
  const std::size_t f = trim_count(hood, alpha, hood);
  std::vector<EpochMessage> inbox(hood);
  for (AgentId j = 0; j < hood; ++j) {
    inbox[j].origin = j;
    inbox[j].sums.assign(1, 0.0);
    inbox[j].counts.assign(1, good_count);
  }
  auto set = [&](AgentId j, double value, double count) {
    inbox[j].counts[0] = count;
    inbox[j].sums[0] = value * count;
  };

  std::vector<bool> is_bad(hood, false);
  // Assign values to positions 0..hood-1 recursively.
  std::function<void(std::size_t)> fill = [&](std::size_t j) {
    if (j == hood) {
      const auto out = filter_arm(inbox, 0, prev_gap, alpha, lambda, hood);
      ++res.cases;
      res.worst_low = std::min(res.worst_low, out.raw_estimate);
      res.worst_high = std::max(res.worst_high, out.raw_estimate);
      // Relative slack for the rounding in sum / count and the averaging.
      if (out.raw_estimate < grid.lo - 1e-12 || out.raw_estimate > grid.hi + 1e-12) ++res.failures;
      return;
    }
    if (!is_bad[j]) {
      for (double v : grid.honest) {
        set(j, v, good_count);
        fill(j + 1);
      }
      return;
    }
    for (double v : grid.bad) {
      for (double c : {good_count, 0.0}) {
        set(j, v, c);
        fill(j + 1);
      }
    }
  };

  // Every subset of at most f positions.
  for (std::uint32_t mask = 0; mask < (1u << hood); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) > f) continue;
    for (std::size_t j = 0; j < hood; ++j) is_bad[j] = (mask >> j) & 1u;
    fill(0);
  }
  return res;
}

}  // namespace dmab::testing
