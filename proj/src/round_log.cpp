#include "dmab/round_log.hpp"

namespace dmab {

InvariantReport& InvariantReport::operator+=(const InvariantReport& o) {
  checks += o.checks;
  feasibility += o.feasibility;
  distribution += o.distribution;
  synchrony += o.synchrony;
  gap_floor += o.gap_floor;
  ledger += o.ledger;
  return *this;
}

RoundLog::RoundLog(std::size_t agents_, std::size_t arms_, std::size_t horizon_)
    : agents(agents_),
      arms(arms_),
      horizon(horizon_),
      byzantine(agents_, false),
      pulled(agents_ * horizon_, 0),
      observed(agents_ * horizon_, 0.0),
      corruption(agents_ * horizon_, 0.0),
      broadcasts(horizon_, 0) {}

std::vector<AgentId> RoundLog::normal_agents() const {
  std::vector<AgentId> out;
  for (AgentId i = 0; i < agents; ++i)
    if (!is_byzantine(i)) out.push_back(i);
  return out;
}

}  // namespace dmab
