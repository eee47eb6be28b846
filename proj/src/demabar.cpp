#include "dmab/demabar.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dmab {

namespace {
// Slack for the quorum comparisons only: (1 - 2 alpha)|N| is rational but
// alpha = 1/3 is not representable, so e.g. 3 * (1 - 2/3) lands above 1.
constexpr double kQuorumSlack = 1e-9;

double pow4(std::size_t exponent) { return std::ldexp(1.0, static_cast<int>(2 * exponent)); }
}  // namespace

double theory_lambda(std::size_t agents, std::size_t horizon) {
  return 512.0 * std::log(2.0 * static_cast<double>(agents) * static_cast<double>(horizon));
}

double experiment_lambda(std::size_t agents, std::size_t horizon) {
  const double v = static_cast<double>(agents);
  return 5.0 * std::log(4.0 * v * v * static_cast<double>(horizon));
}

std::uint64_t epoch_length(const DemabarParams& params, std::size_t arms, std::size_t epoch,
                           std::size_t global_min) {
  if (epoch == 0) throw std::invalid_argument("epochs are numbered from 1");
  const double denom = (1.0 - 2.0 * params.alpha) * static_cast<double>(global_min);
  const double n = params.lambda * static_cast<double>(arms) * pow4(epoch - 1) / denom;
  return static_cast<std::uint64_t>(std::ceil(n));
}

double quorum(double alpha, std::size_t hood_size) {
  return (1.0 - 2.0 * alpha) * static_cast<double>(hood_size);
}

std::size_t trim_count(std::size_t available, double alpha, std::size_t hood_size) {
  const double excess = static_cast<double>(available) - quorum(alpha, hood_size);
  if (excess <= 0.0) return 0;
  return static_cast<std::size_t>(std::floor(excess / 2.0 + kQuorumSlack));
}

double trimmed_mean(std::vector<double> values, std::size_t f) {
  if (values.size() <= 2 * f) throw std::invalid_argument("trimmed_mean: nothing left after trimming");
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (std::size_t j = f; j + f < values.size(); ++j) sum += values[j];
  return sum / static_cast<double>(values.size() - 2 * f);
}

ArmFilterOutcome filter_arm(std::span<const EpochMessage> inbox, ArmId k, double prev_gap,
                            double alpha, double lambda, std::size_t hood_size) {
  if (inbox.empty()) throw std::invalid_argument("filter_arm: empty inbox");
  ArmFilterOutcome out;
  out.threshold = lambda / (prev_gap * prev_gap) / quorum(alpha, hood_size);

  std::vector<double> values;
  values.reserve(inbox.size());
  for (const auto& msg : inbox) {
    if (msg.counts[k] >= out.threshold) values.push_back(msg.average(k));
  }
  if (static_cast<double>(values.size()) + kQuorumSlack < quorum(alpha, hood_size)) {
    out.reset = true;
    out.threshold = std::numeric_limits<double>::infinity();
    values.clear();
    for (const auto& msg : inbox) {
      out.threshold = std::min(out.threshold, msg.counts[k]);
      values.push_back(msg.average(k));
    }
  }
  out.trimmed = trim_count(values.size(), alpha, hood_size);
  out.kept = values.size() - 2 * out.trimmed;
  out.raw_estimate = trimmed_mean(std::move(values), out.trimmed);
  out.estimate = std::min(out.raw_estimate, 1.0);
  return out;
}

std::size_t FilterResult::resets() const {
  return static_cast<std::size_t>(
      std::count_if(arms.begin(), arms.end(), [](const auto& a) { return a.reset; }));
}

FilterResult filter_epoch(std::span<const EpochMessage> inbox, std::span<const double> prev_gaps,
                          double alpha, double lambda, std::size_t hood_size) {
  FilterResult result;
  result.estimates.resize(prev_gaps.size());
  result.arms.resize(prev_gaps.size());
  for (ArmId k = 0; k < prev_gaps.size(); ++k) {
    result.arms[k] = filter_arm(inbox, k, prev_gaps[k], alpha, lambda, hood_size);
    result.estimates[k] = result.arms[k].estimate;
  }
  return result;
}

DemabarAgent::DemabarAgent(AgentId id, std::size_t arms, DemabarParams params,
                           NeighborhoodView view)
    : id_(id),
      arms_(arms),
      params_(params),
      view_(view),
      gaps_(arms, 1.0),
      scores_(arms, 0.0),
      planned_(arms, 0.0),
      sampling_(arms, 0.0),
      sums_(arms, 0.0) {
  if (arms == 0) throw std::invalid_argument("agent needs at least one arm");
  if (!(params.alpha >= 0.0 && params.alpha < 0.5))
    throw std::invalid_argument("alpha must lie in [0, 0.5)");
  if (!(params.lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
}

double DemabarAgent::count_cap() const {
  const double denom = (1.0 - 2.0 * params_.alpha) * static_cast<double>(view_.local_min);
  return params_.lambda * pow4(epoch_ - 1) / denom;
}

void DemabarAgent::begin_epoch(std::size_t epoch) {
  if (epoch != epoch_ + 1)
    throw std::logic_error("begin_epoch: expected epoch " + std::to_string(epoch_ + 1));
  epoch_ = epoch;
  rounds_in_epoch_ = 0;
  epoch_length_ = dmab::epoch_length(params_, arms_, epoch_, view_.global_min);

  const double level = std::ldexp(1.0, -static_cast<int>(epoch_ - 1));
  bool found = false;
  for (ArmId k = 0; k < arms_; ++k) {
    if (gaps_[k] != level) continue;
    if (!found || (have_scores_ && scores_[k] > scores_[fallback_])) fallback_ = k;
    found = true;
  }
  assert(found && "no arm sits at the minimum gap level");
  if (!found) throw std::logic_error("begin_epoch: no fallback arm available");

  const double denom = (1.0 - 2.0 * params_.alpha) * static_cast<double>(view_.local_min);
  const double cap = count_cap();
  double others = 0.0;
  for (ArmId k = 0; k < arms_; ++k) {
    if (k == fallback_) continue;
    planned_[k] = std::min(16.0 * params_.lambda / (gaps_[k] * gaps_[k]) / denom, cap);
    others += planned_[k];
  }
  const double length = static_cast<double>(epoch_length_);
  planned_[fallback_] = length - others;
  for (ArmId k = 0; k < arms_; ++k) sampling_[k] = planned_[k] / length;
  std::fill(sums_.begin(), sums_.end(), 0.0);
}

ArmId DemabarAgent::sample_arm(RngStream& rng) const { return rng.categorical(sampling_); }

void DemabarAgent::record_observation(ArmId arm, double reward) {
  if (arm >= arms_) throw std::out_of_range("record_observation: arm out of range");
  if (params_.require_unit_rewards && !(reward >= 0.0 && reward <= 1.0))
    throw std::invalid_argument("record_observation: reward outside [0,1]");
  sums_[arm] += reward;
}

ArmId DemabarAgent::act(RngStream& rng) const {
  return communicating() ? fallback_ : sample_arm(rng);
}

void DemabarAgent::observe(ArmId arm, double reward) {
  if (!communicating()) record_observation(arm, reward);
  ++rounds_in_epoch_;
}

EpochMessage DemabarAgent::make_message() const {
  EpochMessage msg;
  msg.origin = id_;
  msg.epoch = epoch_;
  msg.sums = sums_;
  msg.counts = planned_;
  msg.hops_remaining = params_.w;
  return msg;
}

FilterResult DemabarAgent::filter(std::span<const EpochMessage> inbox) const {
  if (inbox.empty()) {
    const EpochMessage own = make_message();
    return filter_epoch(std::span(&own, 1), gaps_, params_.alpha, params_.lambda, 1);
  }
  return filter_epoch(inbox, gaps_, params_.alpha, params_.lambda, view_.hood_size);
}

void DemabarAgent::update_gaps(std::span<const double> estimates) {
  if (estimates.size() != arms_) throw std::invalid_argument("update_gaps: size mismatch");
  double best = -std::numeric_limits<double>::infinity();
  for (ArmId k = 0; k < arms_; ++k) {
    scores_[k] = estimates[k] - gaps_[k] / 8.0;
    best = std::max(best, scores_[k]);
  }
  have_scores_ = true;
  const double floor_gap = std::ldexp(1.0, -static_cast<int>(epoch_));
  for (ArmId k = 0; k < arms_; ++k) gaps_[k] = std::max(floor_gap, best - estimates[k]);
}

FloodRelay::FloodRelay(const Topology& topology, std::vector<EpochMessage> own_messages,
                       std::size_t hops)
    : topology_(&topology), hops_(hops), own_(std::move(own_messages)) {
  const std::size_t V = topology.node_count();
  if (own_.size() != V) throw std::invalid_argument("FloodRelay: one message per agent required");
  held_.assign(V, std::vector<EpochMessage>(V));
  has_.assign(V, std::vector<bool>(V, false));
  fresh_.assign(V, {});
  forging_.assign(V, false);
  for (AgentId i = 0; i < V; ++i) {
    held_[i][i] = own_[i];
    has_[i][i] = true;
  }
}

void FloodRelay::set_forger(std::vector<bool> forging_senders, Forge forge) {
  forging_ = std::move(forging_senders);
  forging_.resize(topology_->node_count(), false);
  forge_ = std::move(forge);
}

std::size_t FloodRelay::step() {
  const std::size_t V = topology_->node_count();
  ++rounds_;
  std::vector<std::vector<AgentId>> next_fresh(V);
  for (AgentId sender = 0; sender < V; ++sender) {
    std::vector<AgentId> outgoing{sender};
    for (AgentId origin : fresh_[sender]) {
      if (origin != sender) outgoing.push_back(origin);
    }
    for (AgentId recipient : topology_->neighbors(sender)) {
      for (AgentId origin : outgoing) {
        if (has_[recipient][origin]) continue;
        EpochMessage msg = held_[sender][origin];
        if (forging_[sender] && forge_) msg = forge_(sender, recipient, msg);
        msg.hops_remaining = hops_ > rounds_ ? hops_ - rounds_ : 0;
        held_[recipient][origin] = std::move(msg);
        has_[recipient][origin] = true;
        next_fresh[recipient].push_back(origin);
      }
    }
  }
  // Only relay what still has hops left.
  for (AgentId i = 0; i < V; ++i) {
    std::erase_if(next_fresh[i], [&](AgentId o) { return held_[i][o].hops_remaining == 0; });
  }
  fresh_ = std::move(next_fresh);
  return V;
}

std::vector<EpochMessage> FloodRelay::inbox(AgentId agent) const {
  std::vector<EpochMessage> out;
  for (AgentId origin = 0; origin < held_[agent].size(); ++origin) {
    if (has_[agent][origin]) out.push_back(held_[agent][origin]);
  }
  return out;
}

}  // namespace dmab
