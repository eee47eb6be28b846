#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dmab/adversary.hpp"

using namespace dmab;

namespace {
RewardMatrix matrix(std::size_t V, std::size_t K, std::initializer_list<double> values) {
  RewardMatrix m(V, K);
  std::size_t idx = 0;
  for (double v : values) m(idx / K, idx % K) = v, ++idx;
  return m;
}

double recompute_charge(const RewardMatrix& before, const RewardMatrix& after) {
  double total = 0.0;
  for (std::size_t i = 0; i < before.agents(); ++i) {
    double row = 0.0;
    for (ArmId k = 0; k < before.arms(); ++k) row = std::max(row, std::abs(after(i, k) - before(i, k)));
    total += row;
  }
  return total;
}
}  // namespace

TEST_CASE("zero budget leaves rewards untouched") {
  auto rewards = matrix(2, 2, {0.8, 0.3, 0.7, 0.2});
  const auto original = rewards;
  RewardMatrix desired(2, 2);
  CorruptionLedger ledger(0.0, {true, true});
  corrupt(rewards, desired, ledger);
  CHECK(rewards == original);
  CHECK(ledger.spent == 0.0);
}

TEST_CASE("charge is the per-agent maximum change") {
  auto rewards = matrix(2, 2, {0.8, 0.3, 0.7, 0.2});
  auto desired = rewards;
  desired(0, 0) = 0.0;
  CorruptionLedger ledger(5.0, {true, true});
  const auto charges = corrupt(rewards, desired, ledger);
  CHECK(rewards(0, 0) == 0.0);
  CHECK(rewards(1, 0) == 0.7);
  CHECK(ledger.spent == doctest::Approx(0.8));
  CHECK(charges[0] == doctest::Approx(0.8));
  CHECK(charges[1] == 0.0);
}

TEST_CASE("agents outside the attackable set are never touched") {
  auto rewards = matrix(2, 2, {0.8, 0.3, 0.7, 0.2});
  RewardMatrix desired(2, 2);
  CorruptionLedger ledger(10.0, {false, true});
  corrupt(rewards, desired, ledger);
  CHECK(rewards(0, 0) == 0.8);
  CHECK(rewards(0, 1) == 0.3);
  CHECK(rewards(1, 0) == 0.0);
  CHECK(ledger.spent == doctest::Approx(0.7));
}

TEST_CASE("targeted attack: hand trace over five rounds with one agent") {
  // mu = (0.9, 0.3): arm 1 is the target, arm 0 gets zeroed until C = 2.5 is spent.
  const auto inst = make_instance({0.9, 0.3}, RewardFamily::Gaussian, 0.01);
  CorruptionLedger ledger(2.5, {true});
  TargetedAttack attack;
  const double rows[5][2] = {{0.9, 0.3}, {0.88, 0.31}, {0.91, 0.29}, {0.9, 0.3}, {0.89, 0.3}};
  // Expected: 0.9 and 0.88 fully, 0.72 left for round 3 (0.91 -> 0.19), then nothing.
  const double expected_arm0[5] = {0.0, 0.0, 0.19, 0.9, 0.89};
  const double expected_spent[5] = {0.9, 1.78, 2.5, 2.5, 2.5};
  for (int t = 0; t < 5; ++t) {
    auto r = matrix(1, 2, {rows[t][0], rows[t][1]});
    targeted_attack_policy(inst, r, ledger, attack);
    CHECK(r(0, 0) == doctest::Approx(expected_arm0[t]).epsilon(1e-12));
    CHECK(r(0, 1) == rows[t][1]);
    CHECK(ledger.spent == doctest::Approx(expected_spent[t]).epsilon(1e-12));
    CHECK(ledger.spent <= ledger.budget);
  }
}

TEST_CASE("targeted attack rule and truncation") {
  TargetedAttack attack;
  SUBCASE("all arms are targets: identity") {
    const auto inst = make_instance({0.5, 0.2, 0.4}, RewardFamily::Gaussian, 0.01);
    auto r = matrix(1, 3, {0.5, 0.2, 0.4});
    const auto original = r;
    CorruptionLedger ledger(10.0, {true});
    targeted_attack_policy(inst, r, ledger, attack);
    CHECK(r == original);
    CHECK(ledger.spent == 0.0);
  }
  SUBCASE("non-target entry zeroed and charged") {
    const auto inst = make_instance({0.9, 0.2}, RewardFamily::Gaussian, 0.01);
    auto r = matrix(1, 2, {0.899, 0.2});
    CorruptionLedger ledger(10.0, {true});
    const auto charges = targeted_attack_policy(inst, r, ledger, attack);
    CHECK(r(0, 0) == 0.0);
    CHECK(r(0, 1) == 0.2);
    CHECK(charges[0] == doctest::Approx(0.899));
  }
  SUBCASE("remaining budget scales the last corruption") {
    const auto inst = make_instance({0.9, 0.2}, RewardFamily::Gaussian, 0.01);
    auto r = matrix(1, 2, {0.9, 0.2});
    CorruptionLedger ledger(1.0, {true});
    ledger.spent = 0.6;
    targeted_attack_policy(inst, r, ledger, attack);
    CHECK(r(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ledger.spent == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ledger.spent <= ledger.budget);
    CHECK(ledger.exhausted() == (ledger.spent >= ledger.budget));
  }
  SUBCASE("reward-is-one trigger only fires on saturated rewards") {
    const auto inst = make_instance({0.9, 0.2}, RewardFamily::Bernoulli, 0.0);
    attack.trigger = AttackTrigger::RewardIsOne;
    auto r = matrix(2, 2, {1.0, 0.0, 0.0, 1.0});
    CorruptionLedger ledger(10.0, {true, true});
    targeted_attack_policy(inst, r, ledger, attack);
    CHECK(r(0, 0) == 0.0);
    CHECK(r(1, 0) == 0.0);
    CHECK(r(1, 1) == 1.0);
    CHECK(ledger.spent == 1.0);
  }
}

TEST_CASE("ledger is monotone, bounded, and equals the post-hoc corruption level") {
  RngStream rng(99);
  for (int scenario = 0; scenario < 20; ++scenario) {
    const std::size_t V = 1 + rng.index(6), K = 2 + rng.index(5);
    std::vector<double> means(K);
    for (double& m : means) m = rng.uniform(0.1, 0.9);
    const auto inst = make_instance(means, RewardFamily::Gaussian, 0.05);
    std::vector<bool> attackable(V);
    for (std::size_t i = 0; i < V; ++i) attackable[i] = rng.bernoulli(0.6);
    CorruptionLedger ledger(rng.uniform(0.0, 30.0), attackable);
    TargetedAttack attack;
    RewardMatrix r(V, K);
    double posthoc = 0.0;
    double prev = 0.0;
    for (int t = 0; t < 200; ++t) {
      sample_reward_vectors(inst, rng, r);
      const auto before = r;
      const auto charges = targeted_attack_policy(inst, r, ledger, attack);
      for (std::size_t i = 0; i < V; ++i) {
        if (!attackable[i]) {
          for (ArmId k = 0; k < K; ++k) CHECK(r(i, k) == before(i, k));
        }
        double row = 0.0;
        for (ArmId k = 0; k < K; ++k) row = std::max(row, std::abs(r(i, k) - before(i, k)));
        CHECK(row == charges[i]);
        posthoc += row;
      }
      CHECK(ledger.spent >= prev);
      CHECK(ledger.spent <= ledger.budget);
      CHECK(recompute_charge(before, r) == doctest::Approx(ledger.spent - prev).epsilon(1e-12));
      prev = ledger.spent;
    }
    CHECK(posthoc == ledger.spent);
  }
}

TEST_CASE("adaptive Byzantine message mirrors the true means with inflated counts") {
  const auto inst = make_instance({0.9, 0.3}, RewardFamily::Gaussian, 0.01);
  auto spec = make_byzantine_spec({2}, 4, 2, ByzantineAttack::Adaptive, 1, 0);
  EpochMessage honest{2, 3, {5.0, 2.0}, {6.0, 6.0}, 1};
  RngStream rng(1);
  const auto forged = byzantine_message(spec, honest, 0, inst, 500.0, rng);
  CHECK(forged.origin == 2);
  CHECK(forged.epoch == 3);
  CHECK(forged.average(0) == doctest::Approx(0.1));
  CHECK(forged.average(1) == doctest::Approx(0.7));
  CHECK(forged.counts == std::vector<double>{500.0, 500.0});
}

TEST_CASE("Gaussian Byzantine message") {
  const auto inst = make_instance({0.9, 0.3}, RewardFamily::Gaussian, 0.01);
  EpochMessage honest{1, 1, {4.5, 1.5}, {5.0, 5.0}, 1};

  SUBCASE("zero bias and zero noise reproduce the honest message") {
    auto spec = make_byzantine_spec({1}, 3, 2, ByzantineAttack::Gaussian, 1, 0);
    spec.biases[1] = {0.0, 0.0};
    spec.noise = 0.0;
    RngStream rng(3);
    CHECK(byzantine_message(spec, honest, 0, inst, 100.0, rng) == honest);
  }
  SUBCASE("injected offsets average to the bias") {
    auto spec = make_byzantine_spec({1}, 3, 2, ByzantineAttack::Gaussian, 1, 0);
    spec.biases[1] = {0.5, 0.5};
    RngStream rng(4);
    const int n = 100000;
    double sum = 0.0;
    for (int s = 0; s < n; ++s) {
      const auto f = byzantine_message(spec, honest, s % 2, inst, 100.0, rng);
      sum += f.average(0) - honest.average(0);
    }
    CHECK(std::abs(sum / n - 0.5) <= 0.01);
  }
  SUBCASE("recipients see independent draws") {
    auto spec = make_byzantine_spec({1}, 3, 2, ByzantineAttack::Gaussian, 1, 0);
    RngStream rng(5);
    const auto to0 = byzantine_message(spec, honest, 0, inst, 100.0, rng);
    const auto to2 = byzantine_message(spec, honest, 2, inst, 100.0, rng);
    CHECK(to0.sums != to2.sums);
  }
  SUBCASE("noise is a variance unless flagged as a standard deviation") {
    ByzantineSpec spec;
    spec.noise = 0.001;
    CHECK(spec.noise_stddev() == doctest::Approx(std::sqrt(0.001)));
    spec.noise_is_std = true;
    CHECK(spec.noise_stddev() == doctest::Approx(0.001));
  }
  SUBCASE("biases lie in (0,1) and are reproducible") {
    const auto a = make_byzantine_spec({0, 2}, 3, 8, ByzantineAttack::Gaussian, 77, 5);
    const auto b = make_byzantine_spec({0, 2}, 3, 8, ByzantineAttack::Gaussian, 77, 5);
    CHECK(a.biases == b.biases);
    CHECK(a.biases[1].empty());
    for (double x : a.biases[0]) CHECK((x > 0.0 && x < 1.0));
  }
}

TEST_CASE("Byzantine arm choice is uniform") {
  RngStream rng(8);
  for (int i = 0; i < 100; ++i) CHECK(byzantine_arm_choice(1, rng) == 0);
  std::vector<int> counts(10, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[byzantine_arm_choice(10, rng)];
  for (int c : counts) CHECK(std::abs(double(c) / n - 0.1) <= 0.01);
}

TEST_CASE("Byzantine fraction check warns per agent") {
  GraphSpec g;
  g.kind = GraphKind::Ring;
  g.nodes = 6;
  const auto ring = build_graph(g);
  const auto one_hop = neighborhood_stats(ring, 1);
  ByzantineSpec spec;
  spec.byzantine = {true, false, false, false, false, false};
  CHECK(check_byzantine_fraction(spec, one_hop, 1.0 / 3.0).empty());
  spec.byzantine = {true, false, true, false, false, false};
  const auto warnings = check_byzantine_fraction(spec, one_hop, 1.0 / 3.0);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("agent 1") != std::string::npos);
}
