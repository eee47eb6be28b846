#include "dmab/engine.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dmab/baselines.hpp"
#include "dmab/demabar.hpp"
#include "dmab/rng.hpp"

namespace dmab {

std::string to_string(LambdaRule rule) {
  switch (rule) {
    case LambdaRule::Experiment: return "experiment";
    case LambdaRule::Theory: return "theory";
    case LambdaRule::Fixed: return "fixed";
  }
  return "unknown";
}

std::string to_string(ThreatModel model) {
  switch (model) {
    case ThreatModel::None: return "none";
    case ThreatModel::Corruption: return "corruption";
    case ThreatModel::Byzantine: return "byzantine";
  }
  return "unknown";
}

namespace {

bool is_cooperative(const std::string& name) { return name == "demabar" || name == "ind_barbar"; }

void check_agents(const std::vector<AgentId>& agents, std::size_t nodes, const std::string& field) {
  for (AgentId a : agents) {
    if (a >= nodes)
      throw ConfigError(field, "agent " + std::to_string(a) + " is not a node (graph has " +
                                   std::to_string(nodes) + ")");
  }
}

}  // namespace

std::vector<std::string> validate(const ExperimentConfig& cfg) {
  std::vector<std::string> warnings;
  if (cfg.horizon < 1) throw ConfigError("horizon", "must be >= 1");
  if (cfg.trials < 1) throw ConfigError("trials", "must be >= 1");

  std::optional<Topology> topology;
  try {
    topology.emplace(build_graph(cfg.graph, cfg.seed));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("graph", e.what());
  }
  const std::size_t V = topology->node_count();

  const auto& inst = cfg.instance;
  if (inst.arms < 2) throw ConfigError("instance.arms", "need at least 2 arms");
  if (!(inst.sigma >= 0.0)) throw ConfigError("instance.sigma", "must be >= 0");
  if (!inst.means.empty()) {
    if (inst.means.size() != inst.arms)
      throw ConfigError("instance.means", "expected " + std::to_string(inst.arms) + " entries");
    for (double mu : inst.means)
      if (!(mu >= 0.0 && mu <= 1.0)) throw ConfigError("instance.means", "means must lie in [0,1]");
  } else if (!(0.0 <= inst.mean_lo && inst.mean_lo <= inst.mean_hi && inst.mean_hi <= 1.0)) {
    throw ConfigError("instance.mean_range", "need 0 <= lo <= hi <= 1");
  }

  const auto& alg = cfg.algorithm;
  const auto& reserved = reserved_baselines();
  if (std::find(reserved.begin(), reserved.end(), alg.name) != reserved.end())
    throw ConfigError("algorithm.name", "'" + alg.name + "' is a reserved slot with no implementation");
  if (alg.name != "demabar" && alg.name != "ind_barbar" && alg.name != "ind_ucb")
    throw ConfigError("algorithm.name", "unknown algorithm '" + alg.name + "'");
  if (!(alg.alpha >= 0.0 && alg.alpha < 0.5))
    throw ConfigError("algorithm.alpha", "must lie in [0, 0.5)");
  if (alg.lambda_rule == LambdaRule::Fixed && !(alg.lambda > 0.0))
    throw ConfigError("algorithm.lambda", "must be positive");
  if (!(alg.ucb_coef > 0.0)) throw ConfigError("algorithm.ucb_coef", "must be positive");

  const auto& threat = cfg.threat;
  switch (threat.model) {
    case ThreatModel::None:
      break;
    case ThreatModel::Corruption:
      if (!(threat.budget >= 0.0)) throw ConfigError("threat.budget", "must be >= 0");
      check_agents(threat.agents, V, "threat.agents");
      if (!(threat.attack.target_threshold >= 0.0 && threat.attack.target_threshold <= 1.0))
        throw ConfigError("threat.target_threshold", "must lie in [0,1]");
      break;
    case ThreatModel::Byzantine: {
      check_agents(threat.agents, V, "threat.agents");
      if (threat.agents.size() >= V)
        throw ConfigError("threat.agents", "at least one agent must be normal");
      if (alg.name == "demabar" && alg.w != 1)
        throw ConfigError("algorithm.w", "Byzantine mode requires w = 1");
      if (!(threat.noise >= 0.0)) throw ConfigError("threat.noise", "must be >= 0");
      ByzantineSpec spec;
      spec.byzantine.assign(V, false);
      for (AgentId a : threat.agents) spec.byzantine[a] = true;
      warnings = check_byzantine_fraction(spec, neighborhood_stats(*topology, 1), alg.alpha);
      break;
    }
  }
  return warnings;
}

double resolve_lambda(const ExperimentConfig& cfg, std::size_t agents) {
  switch (cfg.algorithm.lambda_rule) {
    case LambdaRule::Experiment: return experiment_lambda(agents, cfg.horizon);
    case LambdaRule::Theory: return theory_lambda(agents, cfg.horizon);
    case LambdaRule::Fixed: return cfg.algorithm.lambda;
  }
  return cfg.algorithm.lambda;
}

namespace {

/// Per-trial state of a cooperative run (DeMABAR or its lone-agent variant).
class CooperativeRun {
 public:
  CooperativeRun(const ExperimentConfig& cfg, const Topology& topology, const RoundLog& log,
                 double lambda)
      : topology_(topology), arms_(log.arms), byzantine_(log.byzantine) {
    const std::size_t V = topology.node_count();
    if (cfg.algorithm.name == "ind_barbar") {
      params_ = ind_barbar_params(lambda);
      stats_ = self_only_stats(V);
    } else {
      params_.alpha = cfg.algorithm.alpha;
      params_.w = cfg.algorithm.w;
      params_.lambda = lambda;
      stats_ = neighborhood_stats(topology, params_.w);
    }
    params_.require_unit_rewards = cfg.instance.family == RewardFamily::Bernoulli || cfg.instance.clip;
    for (AgentId i = 0; i < V; ++i) {
      if (!byzantine_[i]) agents_.emplace_back(DemabarAgent(i, arms_, params_, NeighborhoodView::of(stats_, i)));
      else agents_.emplace_back(std::nullopt);
    }
  }

  const DemabarParams& params() const { return params_; }
  std::optional<DemabarAgent>& agent(AgentId i) { return agents_[i]; }
  std::size_t epoch() const { return epoch_; }

  void begin_epoch(std::size_t epoch, std::uint64_t first_round, InvariantReport& report) {
    epoch_ = epoch;
    first_round_ = first_round;
    length_ = epoch_length(params_, arms_, epoch, stats_.global_min);
    position_ = 0;
    relay_.reset();
    const double level = std::ldexp(1.0, -static_cast<int>(epoch - 1));
    for (auto& a : agents_) {
      if (!a) continue;
      a->begin_epoch(epoch);
      ++report.checks;
      if (a->epoch() != epoch || a->epoch_length() != length_) ++report.synchrony;
      const auto planned = a->planned();
      const double total = std::accumulate(planned.begin(), planned.end(), 0.0);
      const double n = static_cast<double>(length_);
      if (std::abs(total - n) > 1e-9 * n ||
          std::any_of(planned.begin(), planned.end(), [](double x) { return x < 0.0; }))
        ++report.feasibility;
      const auto p = a->sampling();
      const double mass = std::accumulate(p.begin(), p.end(), 0.0);
      if (std::abs(mass - 1.0) > 1e-12 ||
          std::any_of(p.begin(), p.end(), [](double x) { return x < 0.0; }))
        ++report.distribution;
      const auto gaps = a->gap_estimates();
      if (std::any_of(gaps.begin(), gaps.end(), [&](double g) { return g < level; }))
        ++report.gap_floor;
    }
  }

  /// Advances the shared clock after the round's observations. Returns the
  /// number of broadcasts of this round and sets `epoch_done` when the
  /// communication window closes.
  std::uint32_t after_round(const BanditInstance& inst, const ByzantineSpec* byz,
                            std::vector<RngStream>& adversary_rngs, bool& epoch_done) {
    ++position_;
    epoch_done = false;
    std::uint32_t sent = 0;
    if (position_ > length_) {
      if (!relay_) start_relay(inst, byz, adversary_rngs);
      sent = static_cast<std::uint32_t>(relay_->step());
    }
    epoch_done = position_ == length_ + params_.w;
    return sent;
  }

  /// Filter and gap update for every normal agent, visited in `order`.
  EpochRecord finish_epoch(const std::vector<AgentId>& order, InvariantReport& report) {
    EpochRecord rec;
    rec.epoch = epoch_;
    rec.first_round = first_round_;
    rec.length = length_;
    rec.comm_rounds = params_.w;
    rec.gaps.assign(agents_.size() * arms_, std::numeric_limits<double>::quiet_NaN());
    for (AgentId i : order) {
      auto& a = agents_[i];
      if (!a) continue;
      ++report.checks;
      if (!a->epoch_finished() || a->rounds_in_epoch() != position_) ++report.synchrony;
      FilterResult result;
      if (relay_) {
        const auto inbox = relay_->inbox(i);
        result = a->filter(inbox);
      } else {
        const EpochMessage own = a->make_message();
        result = a->filter(std::span(&own, 1));
      }
      rec.filter_resets += result.resets();
      a->update_gaps(result.estimates);
      const auto gaps = a->gap_estimates();
      std::copy(gaps.begin(), gaps.end(), rec.gaps.begin() + static_cast<std::ptrdiff_t>(i * arms_));
    }
    return rec;
  }

 private:
  void start_relay(const BanditInstance& inst, const ByzantineSpec* byz,
                   std::vector<RngStream>& adversary_rngs) {
    const std::size_t V = agents_.size();
    std::vector<EpochMessage> own(V);
    std::vector<double> caps(V, 0.0);
    for (AgentId i = 0; i < V; ++i) {
      if (agents_[i]) {
        own[i] = agents_[i]->make_message();
        continue;
      }
      // A Byzantine sender's unforged report: the true means at the per-arm cap.
      const double denom = (1.0 - 2.0 * params_.alpha) * static_cast<double>(stats_.local_min[i]);
      caps[i] = params_.lambda * std::ldexp(1.0, static_cast<int>(2 * (epoch_ - 1))) / denom;
      own[i].origin = i;
      own[i].epoch = epoch_;
      own[i].counts.assign(arms_, caps[i]);
      own[i].sums.resize(arms_);
      for (ArmId k = 0; k < arms_; ++k) own[i].sums[k] = inst.means[k] * caps[i];
      own[i].hops_remaining = params_.w;
    }
    relay_.emplace(topology_, std::move(own), params_.w);
    if (byz != nullptr) {
      relay_->set_forger(byzantine_, [byz, &inst, &adversary_rngs, caps](
                                         AgentId sender, AgentId recipient, const EpochMessage& msg) {
        return byzantine_message(*byz, msg, recipient, inst, caps[sender], adversary_rngs[sender]);
      });
    }
  }

  const Topology& topology_;
  std::size_t arms_;
  std::vector<bool> byzantine_;
  DemabarParams params_;
  NeighborhoodStats stats_;
  std::vector<std::optional<DemabarAgent>> agents_;
  std::size_t epoch_ = 0;
  std::uint64_t first_round_ = 1;
  std::uint64_t length_ = 0;
  std::uint64_t position_ = 0;
  std::optional<FloodRelay> relay_;
};

std::vector<AgentId> visiting_order(const TrialOptions& options, std::size_t V) {
  if (options.agent_order.empty()) {
    std::vector<AgentId> order(V);
    std::iota(order.begin(), order.end(), AgentId{0});
    return order;
  }
  auto sorted = options.agent_order;
  std::sort(sorted.begin(), sorted.end());
  for (AgentId i = 0; i < V; ++i) {
    if (sorted.size() != V || sorted[i] != i)
      throw std::invalid_argument("TrialOptions::agent_order must be a permutation of agents");
  }
  return options.agent_order;
}

}  // namespace

RoundLog run_trial(const ExperimentConfig& cfg, std::size_t trial, const TrialOptions& options) {
  validate(cfg);
  const Topology topology = build_graph(cfg.graph, cfg.seed);
  const std::size_t V = topology.node_count();
  const std::size_t K = cfg.instance.arms;
  const std::size_t T = cfg.horizon;
  const auto order = visiting_order(options, V);

  RoundLog log(V, K, T);
  {
    RngStream instance_rng(cfg.seed, trial, StreamRole::Instance);
    log.instance = sample_instance(cfg.instance, instance_rng);
  }
  const BanditInstance& inst = log.instance;

  RngStream env_rng(cfg.seed, trial, StreamRole::Environment);
  std::vector<RngStream> agent_rngs, byz_arm_rngs, adversary_rngs;
  for (AgentId i = 0; i < V; ++i) {
    agent_rngs.emplace_back(cfg.seed, trial, StreamRole::Agent, i);
    byz_arm_rngs.emplace_back(cfg.seed, trial, StreamRole::ByzantineArm, i);
    adversary_rngs.emplace_back(cfg.seed, trial, StreamRole::Adversary, i);
  }

  std::optional<ByzantineSpec> byz;
  if (cfg.threat.model == ThreatModel::Byzantine) {
    byz = make_byzantine_spec(cfg.threat.agents, V, K, cfg.threat.byzantine_attack, cfg.seed, trial);
    byz->noise = cfg.threat.noise;
    byz->noise_is_std = cfg.threat.noise_is_std;
    log.byzantine = byz->byzantine;
  }
  std::optional<CorruptionLedger> ledger;
  if (cfg.threat.model == ThreatModel::Corruption) {
    std::vector<bool> attackable(V, cfg.threat.all_agents);
    for (AgentId a : cfg.threat.agents) attackable[a] = true;
    ledger.emplace(cfg.threat.budget, std::move(attackable));
  }

  const double lambda = resolve_lambda(cfg, V);
  std::optional<CooperativeRun> coop;
  std::vector<std::unique_ptr<IndependentPolicy>> policies(V);
  if (is_cooperative(cfg.algorithm.name)) {
    coop.emplace(cfg, topology, log, lambda);
    coop->begin_epoch(1, 1, log.invariants);
  } else {
    BaselineParams bp;
    bp.ucb_coef = cfg.algorithm.ucb_coef;
    for (AgentId i = 0; i < V; ++i)
      if (!log.is_byzantine(i)) policies[i] = make_independent_policy(cfg.algorithm.name, K, bp);
  }

  RewardMatrix rewards(V, K);
  std::vector<ArmId> choice(V, 0);
  for (std::size_t t = 1; t <= T; ++t) {
    sample_reward_vectors(inst, env_rng, rewards);

    if (ledger) {
      const double before = ledger->spent;
      const auto charges = targeted_attack_policy(inst, rewards, *ledger, cfg.threat.attack);
      for (AgentId i = 0; i < V; ++i) log.corruption[log.slot(t, i)] = charges[i];
      ++log.invariants.checks;
      if (ledger->spent < before || ledger->spent > ledger->budget) ++log.invariants.ledger;
    }

    for (AgentId i : order) {
      if (log.is_byzantine(i)) {
        choice[i] = byzantine_arm_choice(K, byz_arm_rngs[i]);
      } else if (coop) {
        choice[i] = coop->agent(i)->act(agent_rngs[i]);
      } else {
        choice[i] = policies[i]->select(t, agent_rngs[i]);
      }
    }
    for (AgentId i : order) {
      const double r = rewards(i, choice[i]);
      log.pulled[log.slot(t, i)] = choice[i];
      log.observed[log.slot(t, i)] = r;
      if (log.is_byzantine(i)) continue;
      if (coop) coop->agent(i)->observe(choice[i], r);
      else policies[i]->observe(choice[i], r);
    }

    if (coop) {
      bool epoch_done = false;
      log.broadcasts[t - 1] =
          coop->after_round(inst, byz ? &*byz : nullptr, adversary_rngs, epoch_done);
      if (epoch_done) {
        log.epochs.push_back(coop->finish_epoch(order, log.invariants));
        if (t < T) coop->begin_epoch(coop->epoch() + 1, t + 1, log.invariants);
      }
    }
  }
  if (ledger) log.corruption_spent = ledger->spent;
  return log;
}

bool TrialSummary::operator==(const TrialSummary& o) const {
  auto same_epochs = [](const std::vector<EpochRecord>& a, const std::vector<EpochRecord>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t e = 0; e < a.size(); ++e) {
      if (a[e].epoch != b[e].epoch || a[e].first_round != b[e].first_round ||
          a[e].length != b[e].length || a[e].filter_resets != b[e].filter_resets ||
          a[e].gaps.size() != b[e].gaps.size())
        return false;
      for (std::size_t j = 0; j < a[e].gaps.size(); ++j) {
        const double x = a[e].gaps[j], y = b[e].gaps[j];
        if (!(x == y || (std::isnan(x) && std::isnan(y)))) return false;
      }
    }
    return true;
  };
  return trial == o.trial && normal_agents == o.normal_agents && agent_regret == o.agent_regret &&
         mean_regret == o.mean_regret && comm_cost == o.comm_cost && same_epochs(epochs, o.epochs) &&
         invariants.violations() == o.invariants.violations() &&
         invariants.checks == o.invariants.checks && corruption_spent == o.corruption_spent &&
         instance.means == o.instance.means;
}

TrialSummary summarize(const RoundLog& log, std::size_t trial) {
  TrialSummary s;
  s.trial = trial;
  s.normal_agents = log.normal_agents();
  s.mean_regret.assign(log.horizon, 0.0);
  for (AgentId i : s.normal_agents) {
    s.agent_regret.push_back(regret_curve(log, i));
    const auto& curve = s.agent_regret.back();
    for (std::size_t t = 0; t < log.horizon; ++t) s.mean_regret[t] += curve[t];
  }
  const double n = static_cast<double>(s.normal_agents.size());
  for (double& x : s.mean_regret) x /= n;
  s.comm_cost = comm_cost_curve(log);
  s.epochs = log.epochs;
  s.invariants = log.invariants;
  s.corruption_spent = log.corruption_spent;
  s.instance = log.instance;
  return s;
}

InvariantReport ExperimentResult::invariants() const {
  InvariantReport total;
  for (const auto& t : trials) total += t.invariants;
  return total;
}

namespace {
ExperimentResult finish(const ExperimentConfig& cfg, std::vector<TrialSummary> trials) {
  ExperimentResult result;
  result.config = cfg;
  result.trials = std::move(trials);
  std::vector<std::vector<double>> curves;
  curves.reserve(result.trials.size());
  for (const auto& t : result.trials) curves.push_back(t.mean_regret);
  result.regret = aggregate(curves);
  result.comm_cost.assign(cfg.horizon, 0.0);
  for (const auto& t : result.trials)
    for (std::size_t r = 0; r < cfg.horizon; ++r)
      result.comm_cost[r] += static_cast<double>(t.comm_cost[r]);
  for (double& c : result.comm_cost) c /= static_cast<double>(result.trials.size());
  return result;
}
}  // namespace

ExperimentResult run_experiment_serial(const ExperimentConfig& cfg) {
  validate(cfg);
  std::vector<TrialSummary> trials;
  trials.reserve(cfg.trials);
  for (std::size_t k = 0; k < cfg.trials; ++k) trials.push_back(summarize(run_trial(cfg, k), k));
  return finish(cfg, std::move(trials));
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::size_t jobs) {
  validate(cfg);
  const auto n = static_cast<std::ptrdiff_t>(cfg.trials);
  std::vector<TrialSummary> trials(cfg.trials);
  std::vector<std::exception_ptr> errors(cfg.trials);
#ifdef _OPENMP
  const int threads = jobs == 0 ? omp_get_max_threads() : static_cast<int>(jobs);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
#endif
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    try {
      const auto trial = static_cast<std::size_t>(k);
      trials[trial] = summarize(run_trial(cfg, trial), trial);
    } catch (...) {
      errors[static_cast<std::size_t>(k)] = std::current_exception();
    }
  }
  (void)jobs;
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return finish(cfg, std::move(trials));
}

}  // namespace dmab
