#pragma once

#include <cstdint>
#include <vector>

namespace agenthub::sim {

// splitmix64: tiny, fully specified, identical on every platform. Standard
// library engines are portable but their distributions are not, and replay
// tests need bit-stable draws.
class Splitmix64 {
 public:
  explicit Splitmix64(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Unbiased-enough modulo draw in [0, bound); bound << 2^64 here.
  uint64_t next_below(uint64_t bound) { return next_u64() % bound; }

  bool next_bernoulli(double prob) { return next_double() < prob; }

 private:
  uint64_t state_;
};

// Independent stream per (seed, agent, purpose): agent draws stay identical
// whatever the team size or read policy.
inline uint64_t stream_seed(uint64_t seed, uint64_t agent, uint64_t purpose) {
  Splitmix64 mixer(seed ^ (agent * 0x9e3779b97f4a7c15ull) ^ (purpose * 0xc2b2ae3d27d4eb4full));
  return mixer.next_u64();
}

// Categorical sample from nonnegative weights via cumulative inversion.
inline size_t sample_weighted(const std::vector<double>& weights, Splitmix64& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  double target = rng.next_double() * total;
  double cumulative = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    cumulative += weights[i];
    if (target < cumulative) return i;
  }
  return weights.size() - 1;
}

}  // namespace agenthub::sim
