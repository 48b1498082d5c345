// Seeded, splittable randomness. All randomized operations take a 64-bit
// seed and are bit-reproducible across platforms: raw engine output is
// mapped to doubles directly instead of going through std distributions
// (whose algorithms are implementation-defined).
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "carath/core.hpp"

namespace carath {

using RngSeed = std::uint64_t;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic sub-seed for retry/worker `index` of a base seed.
inline RngSeed derive_seed(RngSeed seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 1));
}

class Rng {
 public:
  explicit Rng(RngSeed seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  // uniform in [0, 1)
  double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // uniform in {0, ..., n-1} by rejection-free scaling (n small here)
  int next_index(int n) { return static_cast<int>(next_double() * n) % n; }

  // Rademacher +-1
  double next_sign() { return (engine_() & 1ULL) ? 1.0 : -1.0; }

 private:
  std::mt19937_64 engine_;
};

// Inverse-CDF sampler over a fixed probability vector.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(const Vec& weights) : cdf_(weights.size()) {
    double acc = 0.0;
    for (size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      cdf_[i] = acc;
    }
    require(acc > 0.0, "DiscreteSampler: weights must have positive mass");
    cdf_.back() = acc;  // guard against drift
    total_ = acc;
  }

  int draw(Rng& rng) const {
    double u = rng.next_double() * total_;
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return static_cast<int>(it - cdf_.begin());
  }

 private:
  Vec cdf_;
  double total_ = 0.0;
};

}  // namespace carath
