// Bimatrix games: sparsity, eps-Nash verification, the Mangasarian-Stone
// bilinear-program objective, the sparse-game equilibrium search and its
// variants (small-probability, scaled, both-sparse, welfare floor), and an
// exact rational support-enumeration oracle for small games.
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "carath/caratheodory.hpp"
#include "carath/convex.hpp"
#include "carath/core.hpp"
#include "carath/enumerate.hpp"
#include "carath/parallel.hpp"
#include "carath/rational.hpp"
#include "carath/rng.hpp"

namespace carath {

struct BimatrixGame {
  Matrix A, B, C;  // C = A + B
  int n = 0;

  BimatrixGame() = default;
  BimatrixGame(Matrix a, Matrix b) : A(std::move(a)), B(std::move(b)) {
    validate_matrix(A, "game A");
    validate_matrix(B, "game B");
    require(A.rows == A.cols && B.rows == A.rows && B.cols == A.cols,
            "game: A and B must be square with equal shapes");
    n = A.rows;
    for (double v : A.data) require(std::fabs(v) <= 1.0, "game: A entries must lie in [-1, 1]");
    for (double v : B.data) require(std::fabs(v) <= 1.0, "game: B entries must lie in [-1, 1]");
    C = Matrix(n, n);
    for (size_t i = 0; i < C.data.size(); ++i) C.data[i] = A.data[i] + B.data[i];
  }

  PointSet columns_of_C() const {
    std::vector<Vec> cols;
    cols.reserve(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) cols.push_back(C.col(j));
    return PointSet(std::move(cols));
  }
};

struct SparsityInfo {
  int s = 4;
  double p = 2.0;
};

// s := max{ max_i ||C^i||_0, 4 },  p = log2 s
inline SparsityInfo sparsity(const BimatrixGame& g) {
  SparsityInfo out;
  int dens = 0;
  for (int j = 0; j < g.n; ++j) dens = std::max(dens, l0_count(g.C.col(j)));
  out.s = std::max(dens, 4);
  out.p = std::log2(static_cast<double>(out.s));
  return out;
}

struct MixedProfile {
  Vec x, y;
};

inline void validate_profile(const BimatrixGame& g, const MixedProfile& prof) {
  require(static_cast<int>(prof.x.size()) == g.n && static_cast<int>(prof.y.size()) == g.n,
          "profile: dimension mismatch");
  require(in_simplex(prof.x) && in_simplex(prof.y), "profile: x and y must be distributions");
}

struct EquilibriumCertificate {
  MixedProfile profile;
  double row_regret = 0.0;
  double col_regret = 0.0;
  double pi1 = 0.0;  // x^T A y
  double pi2 = 0.0;  // x^T B y
  std::optional<UniformCombination> u_used;
  std::optional<double> residual;

  double max_regret() const { return std::max(row_regret, col_regret); }
};

inline EquilibriumCertificate verify_eps_nash(const BimatrixGame& g, const MixedProfile& prof) {
  validate_profile(g, prof);
  EquilibriumCertificate cert;
  cert.profile = prof;
  Vec Ay = mat_vec(g.A, prof.y);
  Vec xB = vec_mat(prof.x, g.B);
  cert.pi1 = dot(prof.x, Ay);
  cert.pi2 = dot(xB, prof.y);
  double best_row = -kInf, best_col = -kInf;
  for (double v : Ay) best_row = std::max(best_row, v);
  for (double v : xB) best_col = std::max(best_col, v);
  cert.row_regret = best_row - cert.pi1;
  cert.col_regret = best_col - cert.pi2;
  return cert;
}

// Objective of the Mangasarian-Stone bilinear program at a feasible point.
// Throws naming the violated row when (x, y, pi1, pi2) is infeasible.
inline double bp_objective(const BimatrixGame& g, const MixedProfile& prof, double pi1, double pi2) {
  validate_profile(g, prof);
  require(pi1 >= -1.0 - kFeasTol && pi1 <= 1.0 + kFeasTol, "bp_objective: pi1 outside [-1,1]");
  require(pi2 >= -1.0 - kFeasTol && pi2 <= 1.0 + kFeasTol, "bp_objective: pi2 outside [-1,1]");
  Vec Ay = mat_vec(g.A, prof.y);
  Vec xB = vec_mat(prof.x, g.B);
  for (int i = 0; i < g.n; ++i) {
    if (Ay[i] > pi1 + kFeasTol) {
      std::ostringstream os;
      os << "bp_objective: row " << i << " violates A y <= pi1 (" << Ay[i] << " > " << pi1 << ")";
      throw std::invalid_argument(os.str());
    }
    if (xB[i] > pi2 + kFeasTol) {
      std::ostringstream os;
      os << "bp_objective: column " << i << " violates x^T B <= pi2 (" << xB[i] << " > " << pi2
         << ")";
      throw std::invalid_argument(os.str());
    }
  }
  return dot(prof.x, mat_vec(g.C, prof.y)) - pi1 - pi2;
}

enum class NormMode { INF_LP, P_NORM };

struct SolveConfig {
  double eps = 0.1;
  double kappa = 256.0;  // multiset-size constant in ceil(kappa p / eps^2)
  NormMode norm_mode = NormMode::INF_LP;
  std::optional<std::uint64_t> max_multiset;  // cap override
  std::optional<double> welfare_floor;
  RngSeed seed = 0;
  bool randomized_mode = false;
  std::uint64_t random_budget = 256;  // multisets sampled in randomized mode
  std::vector<UniformCombination> planted;  // candidates tried before enumeration
  std::optional<double> p_override;  // norm exponent replacing log2(s)

  void validate() const {
    require(eps > 0.0 && eps <= 2.0, "SolveConfig: eps must be in (0, 2]");
    require(kappa > 0.0, "SolveConfig: kappa must be > 0");
    if (p_override) require(*p_override >= 2.0, "SolveConfig: p_override must be >= 2");
  }
};

enum class NashStatus { FOUND, EXHAUSTED };

struct NashSolveReport {
  NashStatus status = NashStatus::EXHAUSTED;
  std::optional<EquilibriumCertificate> certificate;
  std::uint64_t largest_size_tried = 0;
  std::uint64_t candidates_tried = 0;
};

namespace detail {

// Solver outputs carry ~1e-9 LP/first-order drift; snap them back onto the
// simplex before the certificate is built (the regrets are re-verified at
// the snapped point, so soundness is unaffected).
inline Vec snap_to_simplex(Vec v) {
  double s = 0.0;
  for (double& x : v) {
    if (x < 0.0) x = 0.0;
    s += x;
  }
  require(s > 0.5, "snap_to_simplex: point too far from the simplex");
  for (double& x : v) x /= s;
  return v;
}

inline std::uint64_t multiset_cap(double kappa, double p, double eps,
                                  const std::optional<std::uint64_t>& override_cap) {
  double raw = std::ceil(kappa * p / (eps * eps));
  std::uint64_t cap = raw >= 9.0e18 ? UINT64_MAX : static_cast<std::uint64_t>(std::max(1.0, raw));
  if (override_cap) cap = std::min(cap, std::max<std::uint64_t>(1, *override_cap));
  return cap;
}

// Candidate stream: planted combinations first, then either the exhaustive
// lazy enumeration or seeded random multisets (sizes cycling 1..cap).
class CandidateStream {
 public:
  CandidateStream(const std::vector<UniformCombination>& planted, int n, std::uint64_t cap,
                  bool randomized, RngSeed seed, std::uint64_t budget)
      : planted_(planted), enumerator_(n, cap), n_(n), cap_(cap), randomized_(randomized),
        seed_(seed), budget_(budget) {}

  std::optional<UniformCombination> next() {
    if (pos_ < planted_.size()) return planted_[pos_++];
    if (!randomized_) return enumerator_.next();
    if (drawn_ >= budget_) return std::nullopt;
    Rng rng(derive_seed(seed_, drawn_));
    std::uint64_t size = 1 + drawn_ % std::min<std::uint64_t>(cap_, 4096);
    std::vector<int> idx(static_cast<size_t>(size));
    for (auto& v : idx) v = rng.next_index(n_);
    ++drawn_;
    return UniformCombination(std::move(idx));
  }

 private:
  const std::vector<UniformCombination>& planted_;
  UniformEnumerator enumerator_;
  int n_;
  std::uint64_t cap_;
  bool randomized_;
  RngSeed seed_;
  std::uint64_t budget_;
  size_t pos_ = 0;
  std::uint64_t drawn_ = 0;
};

struct AcceptParams {
  NormSpec norm = NormSpec::inf();
  double threshold = 0.0;  // residual must come in strictly below this
  std::optional<double> q_cap;
};

inline NashSolveReport search_candidates(const BimatrixGame& g, const SolveConfig& cfg,
                                         const AcceptParams& ap, std::uint64_t cap) {
  PointSet cols = g.columns_of_C();
  CandidateStream stream(cfg.planted, g.n, cap, cfg.randomized_mode, cfg.seed,
                         cfg.random_budget);
  NashSolveReport report;

  std::function<std::optional<UniformCombination>()> next = [&]() {
    auto c = stream.next();
    if (c) {
      ++report.candidates_tried;
      report.largest_size_tried = std::max<std::uint64_t>(report.largest_size_tried,
                                                          static_cast<std::uint64_t>(c->size()));
    }
    return c;
  };
  std::function<std::optional<EquilibriumCertificate>(const UniformCombination&)> eval =
      [&](const UniformCombination& comb) -> std::optional<EquilibriumCertificate> {
    CPInstance inst;
    inst.C = g.C;
    inst.u = combination_vector(comb, cols);
    inst.A = g.A;
    inst.B = g.B;
    inst.eps = cfg.eps;
    inst.norm = ap.norm;
    inst.welfare_floor = cfg.welfare_floor;
    inst.q_norm_cap = ap.q_cap;
    CPSolution sol = solve_cp(inst);
    if (sol.status != CPStatus::OPTIMAL || !(sol.residual < ap.threshold)) return std::nullopt;
    // Holder certificate at acceptance: |x^T (C y - u)| <= ||x||_q residual
    // <= residual, since ||x||_q <= ||x||_1 = 1 on the simplex
    double holder = std::fabs(dot(sol.x, sub(mat_vec(g.C, sol.y), inst.u)));
    if (holder > sol.residual + 1e-9) return std::nullopt;
    EquilibriumCertificate cert =
        verify_eps_nash(g, MixedProfile{snap_to_simplex(sol.x), snap_to_simplex(sol.y)});
    if (cert.max_regret() > cfg.eps + 1e-9) return std::nullopt;  // soundness gate
    cert.u_used = comb;
    cert.residual = sol.residual;
    return cert;
  };

  auto found = first_accept<UniformCombination, EquilibriumCertificate>(next, eval);
  if (found) {
    report.status = NashStatus::FOUND;
    report.certificate = std::move(*found);
  }
  return report;
}

}  // namespace detail

// Enumeration search over k-uniform averages of columns of C (Algorithm-1
// style): accept the first u whose CP(u) residual comes in below
// eps/2 - solve_tol, re-verify the regrets, return the certificate.
inline NashSolveReport solve_sparse_nash(const BimatrixGame& g, const SolveConfig& cfg) {
  cfg.validate();
  double p = cfg.p_override.value_or(sparsity(g).p);
  detail::AcceptParams ap;
  ap.norm = cfg.norm_mode == NormMode::INF_LP ? NormSpec::inf() : NormSpec::finite(p);
  ap.threshold = cfg.eps / 2.0 - kSolveTol;
  std::uint64_t cap = detail::multiset_cap(cfg.kappa, p, cfg.eps, cfg.max_multiset);
  return detail::search_candidates(g, cfg, ap, cap);
}

// Small-probability variant: p = max{2 log2(s/m), 2}, q-norm cap
// ||x||_q <= m^(-1/p), acceptance threshold eps m^(1/p) / 2.
inline double small_prob_exponent(int s, int m) {
  require(s >= 1 && m >= 1, "small_prob_exponent: s, m must be >= 1");
  return std::max(2.0 * std::log2(static_cast<double>(s) / m), 2.0);
}

inline NashSolveReport solve_small_prob(const BimatrixGame& g, int m, const SolveConfig& cfg) {
  cfg.validate();
  require(m >= 1 && m <= g.n, "solve_small_prob: m must be in [1, n]");
  SparsityInfo sp = sparsity(g);
  double p = small_prob_exponent(sp.s, m);
  detail::AcceptParams ap;
  ap.norm = NormSpec::finite(p);  // norm mode forced to P_NORM
  ap.threshold = cfg.eps * std::pow(static_cast<double>(m), 1.0 / p) / 2.0 - kSolveTol;
  ap.q_cap = std::pow(static_cast<double>(m), -1.0 / p);
  std::uint64_t cap = detail::multiset_cap(cfg.kappa, p, cfg.eps, cfg.max_multiset);
  return detail::search_candidates(g, cfg, ap, cap);
}

// Game (alpha A, beta B + gamma 1) rescaled into [-1, 1]. Solving the
// returned game at eps' = eps * eps_scale yields an eps-Nash of (A, B).
struct ScaledGame {
  BimatrixGame game;
  double eps_scale = 1.0;
};

inline ScaledGame normalize_scaled_game(const Matrix& A, const Matrix& B, double alpha, double beta,
                                        double gamma_shift) {
  validate_matrix(A, "scaled A");
  validate_matrix(B, "scaled B");
  require(alpha > 0.0 && beta > 0.0, "normalize_scaled_game: alpha, beta must be > 0");
  Matrix A2 = A, B2 = B;
  double mx = 1.0;
  for (auto& v : A2.data) {
    v *= alpha;
    require(std::isfinite(v), "normalize_scaled_game: entry overflow");
    mx = std::max(mx, std::fabs(v));
  }
  for (auto& v : B2.data) {
    v = beta * v + gamma_shift;
    require(std::isfinite(v), "normalize_scaled_game: entry overflow");
    mx = std::max(mx, std::fabs(v));
  }
  for (auto& v : A2.data) v /= mx;
  for (auto& v : B2.data) v /= mx;
  ScaledGame out{BimatrixGame(std::move(A2), std::move(B2)), std::min(alpha, beta) / mx};
  return out;
}

// Both-sparse variant: enumerate pairs (v, w) over columns of A and rows
// of B, minimize ||A y - v||_inf + ||B^T x - w||_inf by an epigraph LP
// with the coupling row x^T v + w^T y >= pi1 + pi2 - eps/2, accept when
// the combined residual is below eps/2.
inline NashSolveReport solve_both_sparse(const BimatrixGame& g, const SolveConfig& cfg) {
  cfg.validate();
  const int n = g.n;
  int sa = 0, sb = 0;
  for (int j = 0; j < n; ++j) sa = std::max(sa, l0_count(g.A.col(j)));
  for (int i = 0; i < n; ++i) sb = std::max(sb, l0_count(g.B.row(i)));
  int s = std::max(std::max(sa, sb), 4);
  double p = std::log2(static_cast<double>(s));
  std::uint64_t cap = detail::multiset_cap(cfg.kappa, p, cfg.eps, cfg.max_multiset);

  std::vector<Vec> acols, brows;
  for (int j = 0; j < n; ++j) acols.push_back(g.A.col(j));
  for (int i = 0; i < n; ++i) brows.push_back(g.B.row(i));
  PointSet colsA(acols), rowsB(brows);

  NashSolveReport report;
  // pairs ordered by total size, then lexicographically; per-size lists are
  // materialized on demand (the default cap is astronomically large)
  std::map<std::uint64_t, std::vector<UniformCombination>> by_size_cache;
  auto of_size = [&](std::uint64_t sz) -> const std::vector<UniformCombination>& {
    auto it = by_size_cache.find(sz);
    if (it != by_size_cache.end()) return it->second;
    std::vector<UniformCombination> list;
    UniformEnumerator en(n, sz);
    while (auto c = en.next())
      if (static_cast<std::uint64_t>(c->size()) == sz) list.push_back(*c);
    return by_size_cache.emplace(sz, std::move(list)).first->second;
  };

  const double threshold = cfg.eps / 2.0 - kSolveTol;
  for (std::uint64_t total = 2; total <= 2 * cap; ++total) {
    for (std::uint64_t s1 = 1; s1 < total && s1 <= cap; ++s1) {
      std::uint64_t s2 = total - s1;
      if (s2 < 1 || s2 > cap) continue;
      for (const auto& cv : of_size(s1)) {
        Vec v = combination_vector(cv, colsA);
        for (const auto& cw : of_size(s2)) {
          Vec w = combination_vector(cw, rowsB);
          ++report.candidates_tried;
          report.largest_size_tried = std::max(report.largest_size_tried, total);

          // variables (x, y, pi1, pi2, t1, t2)
          const int ix = 0, iy = n, ip1 = 2 * n, ip2 = 2 * n + 1, it1 = 2 * n + 2, it2 = 2 * n + 3;
          Polytope P(2 * n + 4);
          P.add_simplex_rows(ix, n);
          P.add_simplex_rows(iy, n);
          P.set_bounds(ip1, -1.0, 1.0);
          P.set_bounds(ip2, -1.0, 1.0);
          P.set_bounds(it1, 0.0, kInf);
          P.set_bounds(it2, 0.0, kInf);
          for (int i = 0; i < n; ++i) {
            Vec a(static_cast<size_t>(P.dim), 0.0);
            for (int j = 0; j < n; ++j) a[iy + j] = g.A(i, j);
            a[it1] = -1.0;
            P.add_ineq(a, v[i]);
            for (int j = 0; j < n; ++j) a[iy + j] = -g.A(i, j);
            P.add_ineq(a, -v[i]);
          }
          for (int j = 0; j < n; ++j) {
            Vec a(static_cast<size_t>(P.dim), 0.0);
            for (int i = 0; i < n; ++i) a[ix + i] = g.B(i, j);
            a[it2] = -1.0;
            P.add_ineq(a, w[j]);
            for (int i = 0; i < n; ++i) a[ix + i] = -g.B(i, j);
            P.add_ineq(a, -w[j]);
          }
          {  // coupling: -x^T v - w^T y + pi1 + pi2 <= eps/2
            Vec a(static_cast<size_t>(P.dim), 0.0);
            for (int i = 0; i < n; ++i) a[ix + i] = -v[i];
            for (int j = 0; j < n; ++j) a[iy + j] = -w[j];
            a[ip1] = 1.0;
            a[ip2] = 1.0;
            P.add_ineq(a, cfg.eps / 2.0);
          }
          for (int i = 0; i < n; ++i) {  // A y <= pi1
            Vec a(static_cast<size_t>(P.dim), 0.0);
            for (int j = 0; j < n; ++j) a[iy + j] = g.A(i, j);
            a[ip1] = -1.0;
            P.add_ineq(a, 0.0);
          }
          for (int j = 0; j < n; ++j) {  // B^T x <= pi2
            Vec a(static_cast<size_t>(P.dim), 0.0);
            for (int i = 0; i < n; ++i) a[ix + i] = g.B(i, j);
            a[ip2] = -1.0;
            P.add_ineq(a, 0.0);
          }
          Vec obj(static_cast<size_t>(P.dim), 0.0);
          obj[it1] = 1.0;
          obj[it2] = 1.0;
          LPSolution lp = lp_minimize(obj, P);
          if (lp.status != LPStatus::OPTIMAL) continue;
          Vec x(lp.point.begin() + ix, lp.point.begin() + ix + n);
          Vec y(lp.point.begin() + iy, lp.point.begin() + iy + n);
          double r1 = p_norm(sub(mat_vec(g.A, y), v), NormSpec::inf());
          double r2 = p_norm(sub(vec_mat(x, g.B), w), NormSpec::inf());
          if (!(r1 + r2 < threshold)) continue;
          EquilibriumCertificate cert = verify_eps_nash(
              g, MixedProfile{detail::snap_to_simplex(x), detail::snap_to_simplex(y)});
          if (cert.max_regret() > cfg.eps + 1e-9) continue;
          cert.residual = r1 + r2;
          report.status = NashStatus::FOUND;
          report.certificate = cert;
          return report;
        }
      }
    }
  }
  return report;
}

// Binary search over the welfare grid alpha in [-2, 2] (step eps/4) for the
// largest floor at which the sparse search still accepts; implements the
// near-optimal-welfare variant.
inline std::optional<EquilibriumCertificate> solve_max_welfare(const BimatrixGame& g,
                                                               const SolveConfig& cfg) {
  cfg.validate();
  int steps = static_cast<int>(std::ceil(16.0 / cfg.eps));
  auto probe = [&](int k) -> std::optional<EquilibriumCertificate> {
    SolveConfig c = cfg;
    c.welfare_floor = -2.0 + k * (cfg.eps / 4.0);
    NashSolveReport r = solve_sparse_nash(g, c);
    if (r.status == NashStatus::FOUND) return r.certificate;
    return std::nullopt;
  };
  std::optional<EquilibriumCertificate> best = probe(0);
  if (!best) return std::nullopt;
  int lo = 0, hi = steps;  // lo feasible, hi+1 sentinel
  while (lo < hi) {
    int mid = (lo + hi + 1) / 2;
    if (auto cert = probe(mid)) {
      best = cert;
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return best;
}

// All equilibria of a small game (n <= 5) by support enumeration: for each
// support pair, the equilibrium system (indifference on support, inferiority
// off support, simplex rows) is solved as an exact rational feasibility LP.
inline std::vector<MixedProfile> exact_nash_oracle(const BimatrixGame& g) {
  require(g.n <= 5, "exact_nash_oracle: n must be <= 5");
  const int n = g.n;
  std::vector<MixedProfile> found;

  for (unsigned mask_x = 1; mask_x < (1u << n); ++mask_x) {
    for (unsigned mask_y = 1; mask_y < (1u << n); ++mask_y) {
      // variables (x, y, pi1, pi2)
      Polytope P(2 * n + 2);
      const int ix = 0, iy = n, ip1 = 2 * n, ip2 = 2 * n + 1;
      P.add_simplex_rows(ix, n);
      P.add_simplex_rows(iy, n);
      P.set_bounds(ip1, -1.0, 1.0);
      P.set_bounds(ip2, -1.0, 1.0);
      for (int i = 0; i < n; ++i)
        if (!(mask_x >> i & 1)) P.set_bounds(ix + i, 0.0, 0.0);
      for (int j = 0; j < n; ++j)
        if (!(mask_y >> j & 1)) P.set_bounds(iy + j, 0.0, 0.0);

      for (int i = 0; i < n; ++i) {  // (A y)_i vs pi1
        Vec a(static_cast<size_t>(P.dim), 0.0);
        for (int j = 0; j < n; ++j) a[iy + j] = g.A(i, j);
        a[ip1] = -1.0;
        if (mask_x >> i & 1)
          P.add_eq(a, 0.0);
        else
          P.add_ineq(a, 0.0);
      }
      for (int j = 0; j < n; ++j) {  // (B^T x)_j vs pi2
        Vec a(static_cast<size_t>(P.dim), 0.0);
        for (int i = 0; i < n; ++i) a[ix + i] = g.B(i, j);
        a[ip2] = -1.0;
        if (mask_y >> j & 1)
          P.add_eq(a, 0.0);
        else
          P.add_ineq(a, 0.0);
      }

      Vec zero(static_cast<size_t>(P.dim), 0.0);
      LPSolution lp = lp_minimize_exact(zero, P);
      if (lp.status != LPStatus::OPTIMAL) continue;
      MixedProfile prof;
      prof.x.assign(lp.point.begin() + ix, lp.point.begin() + ix + n);
      prof.y.assign(lp.point.begin() + iy, lp.point.begin() + iy + n);
      bool dup = false;
      for (const auto& q : found)
        if (q.x == prof.x && q.y == prof.y) {
          dup = true;
          break;
        }
      if (!dup) found.push_back(std::move(prof));
    }
  }
  return found;
}

}  // namespace carath
