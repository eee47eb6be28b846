#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace dmab {

/// Roles that own an independent random stream inside a trial.
enum class StreamRole : std::uint64_t {
  Instance = 1,
  Environment = 2,
  Agent = 3,
  Adversary = 4,
  ByzantineArm = 5,
  ByzantineBias = 6,
  Topology = 7,
};

/// SplitMix64 finalizer; used only to derive well-separated seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for stream (root, trial, role, index). The derivation is part of the
/// reproducibility contract: changing it changes every recorded result.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t trial,
                                    StreamRole role, std::uint64_t index = 0) {
  std::uint64_t h = mix64(root);
  h = mix64(h ^ trial);
  h = mix64(h ^ static_cast<std::uint64_t>(role));
  h = mix64(h ^ index);
  return h;
}

/// Deterministic random stream. The engine (mt19937_64) output is fixed by the
/// standard; the distributions below are written out so draws do not depend on
/// the standard library vendor.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}
  RngStream(std::uint64_t root, std::uint64_t trial, StreamRole role,
            std::uint64_t index = 0)
      : engine_(derive_seed(root, trial, role, index)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform on the open interval (0, 1).
  double uniform_open01() {
    double u;
    do {
      u = uniform01();
    } while (u == 0.0);
    return u;
  }

  /// Standard normal via Box-Muller; consumes exactly two uniforms per call.
  double normal();

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Uniform integer in [0, n). Rejection sampling keeps it unbiased.
  std::size_t index(std::size_t n);

  /// Categorical draw from non-negative weights that need not be normalized.
  std::size_t categorical(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
};

}  // namespace dmab
