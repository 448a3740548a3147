#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace lftm {

// Seedable generator with fixed draw procedures. mt19937_64 output is pinned
// by the standard, and none of the std distributions are used, so a given
// seed produces the same stream on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // uniform in [0, 1), 53-bit resolution
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, bound)
  int uniform_int(int bound) {
    return static_cast<int>(engine_() % static_cast<std::uint64_t>(bound));
  }

  // Degenerate probabilities are decided without consuming a draw, so runs
  // with an indicator fixed at 0 or 1 share a stream with runs that never
  // sample the indicator at all.
  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform() < p;
  }

 private:
  std::mt19937_64 engine_;
};

// One draw per call. Weights must be nonnegative with a positive total.
inline int sample_unnormalized(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double u = rng.uniform() * total;
  double cum = 0.0;
  for (std::size_t k = 0; k + 1 < weights.size(); ++k) {
    cum += weights[k];
    if (u < cum) return static_cast<int>(k);
  }
  return static_cast<int>(weights.size()) - 1;
}

// Exponentiates in place after max subtraction, then draws once.
inline int sample_log_unnormalized(std::span<double> log_weights, Rng& rng) {
  const double mx = *std::max_element(log_weights.begin(), log_weights.end());
  for (double& x : log_weights) x = std::exp(x - mx);
  return sample_unnormalized(log_weights, rng);
}

}  // namespace lftm
