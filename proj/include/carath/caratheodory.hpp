// Constructive approximate Caratheodory: randomized sampling sparsifier,
// infinity-norm variant, and an empirical Khintchine-bound validator.
//
// The sampling route: a point mu in conv(X) given as a convex combination
// with weights alpha is approximated by the mean of m i.i.d. draws from
// alpha. With m = ceil(4 p gamma^2 / eps^2) the expected p-norm distance
// is at most eps, so each attempt lands within 2 eps with probability at
// least 1/2 (Markov). We retry with fresh sub-seeds and keep the best.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>

#include "carath/core.hpp"
#include "carath/rng.hpp"

namespace carath {

inline std::uint64_t sample_count(double p, double gamma, double eps) {
  require(p >= 2.0, "sample_count: p must be >= 2");
  require(gamma > 0.0 && std::isfinite(gamma), "sample_count: gamma must be > 0");
  require(eps > 0.0 && std::isfinite(eps), "sample_count: eps must be > 0");
  double m = std::ceil(4.0 * p * gamma * gamma / (eps * eps));
  require(m < 9.0e18, "sample_count: bound too large");
  return static_cast<std::uint64_t>(m);
}

struct SparsifyRequest {
  PointSet X;
  Vec mu;
  std::optional<Vec> weights;  // convex weights over X generating mu
  double eps = 0.1;
  NormSpec norm = NormSpec::finite(2.0);
  int max_retries = 32;
};

struct SparsifyResult {
  UniformCombination combination;
  double achieved_distance = 0.0;
  std::uint64_t sample_count_m = 0;
  int retries_used = 0;
  bool accepted = false;  // false: best-effort, distance > 2 eps
};

namespace detail {

inline const Vec& checked_weights(const SparsifyRequest& req) {
  require(req.weights.has_value(), "sparsify: weights required");
  const Vec& w = *req.weights;
  require(static_cast<int>(w.size()) == req.X.size(), "sparsify: weight count mismatch");
  double s = 0.0;
  Vec recon(req.X.dim(), 0.0);
  for (size_t i = 0; i < w.size(); ++i) {
    require(w[i] >= 0.0, "sparsify: weights must be nonnegative");
    s += w[i];
    for (int j = 0; j < req.X.dim(); ++j) recon[j] += w[i] * req.X.points[i][j];
  }
  require(std::fabs(s - 1.0) <= 1e-9, "sparsify: weights must sum to 1");
  for (int j = 0; j < req.X.dim(); ++j)
    require(std::fabs(recon[j] - req.mu[j]) <= 1e-9, "sparsify: weights do not generate mu");
  return w;
}

// One sampling attempt: m i.i.d. index draws, sorted into canonical form.
inline SparsifyResult sample_once(const SparsifyRequest& req, const DiscreteSampler& sampler,
                                  std::uint64_t m, RngSeed seed) {
  Rng rng(seed);
  std::vector<int> idx(m);
  for (std::uint64_t i = 0; i < m; ++i) idx[i] = sampler.draw(rng);
  SparsifyResult r;
  r.combination = UniformCombination(std::move(idx));
  r.sample_count_m = m;
  r.achieved_distance = p_norm(sub(req.mu, combination_vector(r.combination, req.X)), req.norm);
  return r;
}

inline SparsifyResult retry_loop(const SparsifyRequest& req, std::uint64_t m, RngSeed seed) {
  const Vec& w = checked_weights(req);
  DiscreteSampler sampler(w);
  SparsifyResult best;
  for (int attempt = 0; attempt < req.max_retries; ++attempt) {
    SparsifyResult r = sample_once(req, sampler, m, derive_seed(seed, attempt));
    r.retries_used = attempt + 1;
    if (attempt == 0 || r.achieved_distance < best.achieved_distance) best = r;
    if (best.achieved_distance <= 2.0 * req.eps) break;
  }
  best.accepted = best.achieved_distance <= 2.0 * req.eps;
  return best;
}

}  // namespace detail

// Theorem-driven sparsifier for finite p >= 2. m = ceil(4 p gamma^2 / eps^2).
inline SparsifyResult sparsify(const SparsifyRequest& req, RngSeed seed) {
  require(!req.norm.is_inf, "sparsify: use sparsify_infinity for the inf norm");
  require(req.eps > 0.0, "sparsify: eps must be > 0");
  require(req.max_retries >= 1, "sparsify: max_retries must be >= 1");
  validate_vector(req.mu, "sparsify mu");
  require(static_cast<int>(req.mu.size()) == req.X.dim(), "sparsify: mu dimension mismatch");
  double gamma = req.X.gamma(req.norm);
  std::uint64_t m = gamma == 0.0 ? 1 : sample_count(req.norm.p, gamma, req.eps);
  return detail::retry_loop(req, m, seed);
}

// Hoeffding constant for the infinity-norm sparsifier; exposed as config.
struct InfinitySparsifyConfig {
  double c_inf = 2.0;
  double delta_fail = 0.1;
};

// Infinity-norm variant for X in the unit infinity-ball.
// m = ceil(c_inf * ln(2 n / delta_fail) / eps^2).
inline SparsifyResult sparsify_infinity(const SparsifyRequest& req, RngSeed seed,
                                        const InfinitySparsifyConfig& cfg = {}) {
  require(req.eps > 0.0, "sparsify_infinity: eps must be > 0");
  require(req.max_retries >= 1, "sparsify_infinity: max_retries must be >= 1");
  validate_vector(req.mu, "sparsify mu");
  require(static_cast<int>(req.mu.size()) == req.X.dim(), "sparsify_infinity: mu dimension mismatch");
  require(req.X.gamma(NormSpec::inf()) <= 1.0 + kZeroTol,
          "sparsify_infinity: points must lie in the unit infinity-ball");
  double n = static_cast<double>(req.X.size());
  std::uint64_t m = static_cast<std::uint64_t>(
      std::max(1.0, std::ceil(cfg.c_inf * std::log(2.0 * n / cfg.delta_fail) / (req.eps * req.eps))));
  SparsifyRequest r = req;
  r.norm = NormSpec::inf();
  return detail::retry_loop(r, m, seed);
}

struct KhintchineCheck {
  double lhs_estimate = 0.0;  // empirical E || sum r_i u_i ||_p
  double rhs_bound = 0.0;     // sqrt(p) (sum ||u_i||_p^2)^(1/2)
};

inline KhintchineCheck khintchine_check(const std::vector<Vec>& U, const NormSpec& norm, int trials,
                                        RngSeed seed) {
  require(!norm.is_inf, "khintchine_check: p must be finite");
  require(trials >= 100, "khintchine_check: trials must be >= 100");
  require(!U.empty(), "khintchine_check: need at least one vector");
  size_t d = U[0].size();
  for (const Vec& u : U) require(u.size() == d, "khintchine_check: dimension mismatch");

  Rng rng(seed);
  double acc = 0.0;
  Vec s(d);
  for (int t = 0; t < trials; ++t) {
    std::fill(s.begin(), s.end(), 0.0);
    for (const Vec& u : U) {
      double r = rng.next_sign();
      for (size_t j = 0; j < d; ++j) s[j] += r * u[j];
    }
    acc += p_norm(s, norm);
  }
  KhintchineCheck out;
  out.lhs_estimate = acc / trials;
  double ss = 0.0;
  for (const Vec& u : U) {
    double np = p_norm(u, norm);
    ss += np * np;
  }
  out.rhs_bound = std::sqrt(norm.p) * std::sqrt(ss);
  return out;
}

}  // namespace carath
