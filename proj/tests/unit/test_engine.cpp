#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dmab/engine.hpp"

using namespace dmab;

namespace {
ExperimentConfig base(std::size_t V, std::size_t K, std::size_t T, std::uint64_t seed = 1) {
  ExperimentConfig cfg;
  cfg.graph.kind = GraphKind::Complete;
  cfg.graph.nodes = V;
  cfg.instance.arms = K;
  cfg.horizon = T;
  cfg.seed = seed;
  cfg.algorithm.lambda_rule = LambdaRule::Fixed;
  cfg.algorithm.lambda = 2.0;
  return cfg;
}

bool same_trace(const RoundLog& a, const RoundLog& b) {
  return a.pulled == b.pulled && a.observed == b.observed && a.broadcasts == b.broadcasts &&
         a.corruption == b.corruption;
}

// Rounds with broadcasts in [1, T], from the epoch schedule alone.
std::uint64_t scheduled_comm_rounds(double lambda, double alpha, std::size_t K, std::size_t vmin,
                                    std::size_t w, std::size_t T, std::size_t* completed) {
  std::uint64_t t = 0, comm = 0;
  *completed = 0;
  for (std::size_t m = 1; t < T; ++m) {
    const double n = std::ceil(lambda * K * std::pow(4.0, double(m) - 1) / ((1 - 2 * alpha) * vmin));
    t += static_cast<std::uint64_t>(n);
    if (t >= T) break;
    const std::uint64_t c = std::min<std::uint64_t>(w, T - t);
    comm += c;
    t += c;
    if (c == w) ++*completed;
  }
  return comm;
}
}  // namespace

TEST_CASE("a lone cooperative agent reproduces the independent variant") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    for (std::size_t K : {2u, 5u}) {
      auto cfg = base(1, K, 3000, seed);
      cfg.algorithm.alpha = 0.0;
      cfg.algorithm.w = 0;
      const auto coop = run_trial(cfg, 0);
      cfg.algorithm.name = "ind_barbar";
      const auto ind = run_trial(cfg, 0);
      CHECK(same_trace(coop, ind));
      CHECK(coop.epochs.size() == ind.epochs.size());
    }
  }
}

TEST_CASE("same config and trial give identical logs") {
  auto cfg = base(5, 4, 4000, 9);
  cfg.threat.model = ThreatModel::Corruption;
  cfg.threat.all_agents = true;
  cfg.threat.budget = 50;
  const auto a = run_trial(cfg, 3);
  const auto b = run_trial(cfg, 3);
  CHECK(same_trace(a, b));
  CHECK(a.corruption_spent == b.corruption_spent);
  const auto c = run_trial(cfg, 4);
  CHECK_FALSE(same_trace(a, c));
}

TEST_CASE("broadcast count follows the epoch schedule") {
  for (std::size_t w : {1u, 2u}) {
    for (std::size_t T : {500u, 3000u, 20000u}) {
      auto cfg = base(10, 10, T, 2);
      cfg.algorithm.alpha = 0.0;
      cfg.algorithm.w = w;
      cfg.algorithm.lambda = 8.4;
      const auto log = run_trial(cfg, 0);
      std::size_t completed = 0;
      const auto comm = scheduled_comm_rounds(8.4, 0.0, 10, 10, w, T, &completed);
      CHECK(comm_cost(log) == 10 * comm);
      CHECK(log.epochs.size() == completed);
      if (comm == completed * w) CHECK(comm_cost(log) == 10 * log.epochs.size() * w);
    }
  }
}

TEST_CASE("epochs are synchronous and checks are clean") {
  GraphSpec g;
  g.kind = GraphKind::ErdosRenyi;
  g.nodes = 8;
  g.edge_probability = 0.3;
  auto cfg = base(8, 6, 30000, 5);
  cfg.graph = g;
  cfg.algorithm.w = 2;
  cfg.algorithm.alpha = 0.2;
  const auto log = run_trial(cfg, 1);
  CHECK(log.invariants.checks > 0);
  CHECK(log.invariants.violations() == 0);
  REQUIRE(log.epochs.size() >= 2);
  for (std::size_t e = 0; e + 1 < log.epochs.size(); ++e) {
    const auto& a = log.epochs[e];
    CHECK(log.epochs[e + 1].first_round == a.first_round + a.length + a.comm_rounds);
    CHECK(log.epochs[e + 1].epoch == a.epoch + 1);
  }
  // Every normal agent sees the same clock, so all pulls in a communication
  // round go to the fallback arm of that agent; broadcasts happen in exactly those rounds.
  std::size_t comm_rounds = 0;
  for (auto b : log.broadcasts) comm_rounds += b > 0;
  CHECK(comm_rounds == log.epochs.size() * 2);
}

TEST_CASE("visiting order inside a round does not matter") {
  auto cfg = base(6, 5, 5000, 11);
  cfg.graph.kind = GraphKind::Ring;
  cfg.threat.model = ThreatModel::Byzantine;
  cfg.threat.agents = {2};
  cfg.threat.byzantine_attack = ByzantineAttack::Gaussian;
  TrialOptions reversed{{5, 4, 3, 2, 1, 0}};
  TrialOptions shuffled{{3, 0, 5, 1, 4, 2}};
  const auto a = run_trial(cfg, 0);
  const auto b = run_trial(cfg, 0, reversed);
  const auto c = run_trial(cfg, 0, shuffled);
  CHECK(same_trace(a, b));
  CHECK(same_trace(a, c));
  CHECK(summarize(a, 0) == summarize(b, 0));
  CHECK_THROWS(run_trial(cfg, 0, TrialOptions{{0, 1}}));
}

TEST_CASE("no effective corruption is the same as a clean run") {
  auto clean = base(4, 5, 4000, 21);
  const auto reference = run_trial(clean, 0);
  SUBCASE("zero budget") {
    auto cfg = clean;
    cfg.threat.model = ThreatModel::Corruption;
    cfg.threat.all_agents = true;
    cfg.threat.budget = 0.0;
    const auto log = run_trial(cfg, 0);
    CHECK(log.pulled == reference.pulled);
    CHECK(log.observed == reference.observed);
    CHECK(log.corruption_spent == 0.0);
  }
  SUBCASE("no attackable agents") {
    auto cfg = clean;
    cfg.threat.model = ThreatModel::Corruption;
    cfg.threat.budget = 1000.0;
    const auto log = run_trial(cfg, 0);
    CHECK(log.pulled == reference.pulled);
    CHECK(log.observed == reference.observed);
  }
}

TEST_CASE("corruption is charged only to listed agents and respects the budget") {
  auto cfg = base(5, 4, 3000, 2);
  cfg.instance.means = {0.9, 0.8, 0.3, 0.2};
  cfg.threat.model = ThreatModel::Corruption;
  cfg.threat.agents = {1, 3};
  cfg.threat.budget = 40.0;
  const auto log = run_trial(cfg, 0);
  double total = 0.0;
  for (std::size_t t = 1; t <= cfg.horizon; ++t) {
    for (AgentId i = 0; i < 5; ++i) {
      const double c = log.corruption[log.slot(t, i)];
      if (i != 1 && i != 3) CHECK(c == 0.0);
      total += c;
    }
  }
  CHECK(total == doctest::Approx(log.corruption_spent));
  CHECK(log.corruption_spent <= 40.0);
  CHECK(log.corruption_spent == doctest::Approx(40.0));
}

TEST_CASE("Byzantine agents are excluded and the corruption ledger stays empty") {
  auto cfg = base(6, 4, 3000, 3);
  cfg.graph.kind = GraphKind::Ring;
  cfg.threat.model = ThreatModel::Byzantine;
  cfg.threat.agents = {0, 3};
  const auto log = run_trial(cfg, 0);
  CHECK(log.normal_agents() == std::vector<AgentId>{1, 2, 4, 5});
  CHECK(log.corruption_spent == 0.0);
  for (double c : log.corruption) CHECK(c == 0.0);
  const auto s = summarize(log, 0);
  CHECK(s.agent_regret.size() == 4);
  for (std::size_t e = 0; e < log.epochs.size(); ++e) {
    CHECK(std::isnan(log.epochs[e].gaps[0]));
    CHECK_FALSE(std::isnan(log.epochs[e].gaps[4]));
  }
  CHECK(log.invariants.violations() == 0);
}

TEST_CASE("observed rewards are the environment's matrix entries") {
  auto cfg = base(3, 4, 2000, 17);
  const auto log = run_trial(cfg, 2);
  RngStream irng(cfg.seed, 2, StreamRole::Instance);
  const auto inst = sample_instance(cfg.instance, irng);
  CHECK(inst.means == log.instance.means);
  RngStream env(cfg.seed, 2, StreamRole::Environment);
  RewardMatrix r(3, 4);
  for (std::size_t t = 1; t <= cfg.horizon; ++t) {
    sample_reward_vectors(inst, env, r);
    for (AgentId i = 0; i < 3; ++i) CHECK(log.observed[log.slot(t, i)] == r(i, log.arm(t, i)));
  }
}

TEST_CASE("parallel trials equal serial trials") {
  auto cfg = base(4, 5, 3000, 8);
  cfg.trials = 6;
  cfg.threat.model = ThreatModel::Corruption;
  cfg.threat.all_agents = true;
  cfg.threat.budget = 30;
  const auto serial = run_experiment_serial(cfg);
  for (std::size_t jobs : {1u, 3u, 8u}) {
    const auto par = run_experiment(cfg, jobs);
    REQUIRE(par.trials.size() == serial.trials.size());
    for (std::size_t k = 0; k < serial.trials.size(); ++k) CHECK(par.trials[k] == serial.trials[k]);
    CHECK(par.regret.mean == serial.regret.mean);
    CHECK(par.regret.stddev == serial.regret.stddev);
  }
}

TEST_CASE("one trial aggregates to itself") {
  auto cfg = base(3, 3, 1000, 4);
  const auto res = run_experiment_serial(cfg);
  CHECK(res.regret.mean == res.trials[0].mean_regret);
  for (double s : res.regret.stddev) CHECK(s == 0.0);
}

TEST_CASE("standard error shrinks with the square root of the trial count") {
  auto cfg = base(2, 5, 400, 31);
  cfg.algorithm.name = "ind_ucb";
  cfg.instance.family = RewardFamily::Bernoulli;
  auto se = [&](std::size_t trials, std::uint64_t seed) {
    cfg.trials = trials;
    cfg.seed = seed;
    const auto res = run_experiment(cfg);
    return res.regret.stddev.back() / std::sqrt(double(trials));
  };
  const double small = se(100, 31), large = se(400, 32);
  CHECK(small / large == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("epoch count stays within ln(VT) with the analysis constant") {
  for (std::size_t T : {1000u, 10000u, 60000u}) {
    auto cfg = base(4, 3, T, 1);
    cfg.algorithm.lambda_rule = LambdaRule::Theory;
    const auto log = run_trial(cfg, 0);
    CHECK(double(log.epochs.size()) <= std::log(4.0 * T));
  }
}

TEST_CASE("regret curves are non-decreasing") {
  auto cfg = base(5, 6, 5000, 6);
  cfg.threat.model = ThreatModel::Corruption;
  cfg.threat.all_agents = true;
  cfg.threat.budget = 100;
  const auto s = summarize(run_trial(cfg, 0), 0);
  for (const auto& curve : s.agent_regret) {
    CHECK(curve.front() >= 0.0);
    for (std::size_t t = 1; t < curve.size(); ++t) CHECK(curve[t] >= curve[t - 1]);
  }
}

TEST_CASE("invalid configs are rejected before any round") {
  auto cfg = base(3, 3, 100);
  cfg.horizon = 0;
  CHECK_THROWS_AS(run_trial(cfg, 0), ConfigError);
  cfg = base(3, 3, 100);
  cfg.threat.model = ThreatModel::Byzantine;
  cfg.threat.agents = {0};
  cfg.algorithm.w = 2;
  try {
    run_trial(cfg, 0);
    FAIL("expected rejection");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "algorithm.w");
  }
}

TEST_CASE("UCB degrades almost linearly under a well funded targeted attack") {
  auto cfg = base(3, 4, 5000, 12);
  cfg.algorithm.name = "ind_ucb";
  cfg.instance.means = {0.9, 0.8, 0.3, 0.2};
  cfg.threat.model = ThreatModel::Corruption;
  cfg.threat.all_agents = true;
  cfg.threat.budget = 1e9;
  cfg.trials = 4;
  const auto res = run_experiment_serial(cfg);
  // Pulling the best target arm (mean 0.3) for the whole window costs 0.6 per round.
  CHECK(res.final_mean_regret() > 0.8 * 0.6 * 5000);
}
