#pragma once

#include <vector>

#include "dmab/topology.hpp"

namespace dmab {

/// Per-epoch summary an agent floods to its w-neighborhood.
struct EpochMessage {
  AgentId origin = 0;
  std::size_t epoch = 0;
  std::vector<double> sums;    // S_{origin,k}
  std::vector<double> counts;  // planned (expected) pulls per arm
  std::size_t hops_remaining = 0;

  /// Reported per-arm average; a non-positive count reports 0.
  double average(std::size_t k) const {
    return counts[k] > 0.0 ? sums[k] / counts[k] : 0.0;
  }

  bool operator==(const EpochMessage&) const = default;
};

}  // namespace dmab
