// Convex-hull geometry built on the sparsifier: Birkhoff-von Neumann
// decomposition (exact, by repeated perfect matchings) and its sampled
// k-uniform approximation, rainbow search for colorful configurations,
// approximate Tverberg partitions, and the concurrent-closeness decision.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "carath/caratheodory.hpp"
#include "carath/convex.hpp"
#include "carath/core.hpp"
#include "carath/rng.hpp"
#include "carath/simplex.hpp"

namespace carath {

constexpr double kMatchTol = 1e-10;

struct DoublyStochastic {
  Matrix D;

  explicit DoublyStochastic(Matrix m) : D(std::move(m)) {
    validate_matrix(D, "doubly stochastic");
    require(D.rows == D.cols, "doubly stochastic: must be square");
    for (double v : D.data) require(v >= -kFeasTol, "doubly stochastic: negative entry");
    for (int i = 0; i < D.rows; ++i) {
      double rs = 0.0, cs = 0.0;
      for (int j = 0; j < D.cols; ++j) {
        rs += D(i, j);
        cs += D(j, i);
      }
      require(std::fabs(rs - 1.0) <= kFeasTol, "doubly stochastic: row sum != 1");
      require(std::fabs(cs - 1.0) <= kFeasTol, "doubly stochastic: column sum != 1");
    }
  }

  int dim() const { return D.rows; }
};

struct PermutationDecomposition {
  std::vector<std::vector<int>> perms;  // perms[t][i] = column matched to row i
  Vec weights;

  Matrix reconstruct(int d) const {
    Matrix M(d, d);
    for (size_t t = 0; t < perms.size(); ++t)
      for (int i = 0; i < d; ++i) M(i, perms[t][i]) += weights[t];
    return M;
  }
};

namespace detail {

// Kuhn's augmenting-path perfect matching on entries > tol.
inline bool perfect_matching(const Matrix& M, double tol, std::vector<int>& row_to_col) {
  const int d = M.rows;
  std::vector<int> col_owner(static_cast<size_t>(d), -1);
  std::vector<char> visited;
  std::function<bool(int)> try_row = [&](int i) -> bool {
    for (int j = 0; j < d; ++j) {
      if (M(i, j) <= tol || visited[j]) continue;
      visited[j] = 1;
      if (col_owner[j] < 0 || try_row(col_owner[j])) {
        col_owner[j] = i;
        return true;
      }
    }
    return false;
  };
  for (int i = 0; i < d; ++i) {
    visited.assign(static_cast<size_t>(d), 0);
    if (!try_row(i)) return false;
  }
  row_to_col.assign(static_cast<size_t>(d), -1);
  for (int j = 0; j < d; ++j) row_to_col[col_owner[j]] = j;
  return true;
}

}  // namespace detail

// Exact decomposition: repeatedly match the positive support and subtract
// the smallest matched entry; at most (d-1)^2 + 1 permutations. Residual
// mass below the matching tolerance is folded into the last weight.
inline PermutationDecomposition birkhoff_decompose(const DoublyStochastic& ds) {
  const int d = ds.dim();
  Matrix R = ds.D;
  PermutationDecomposition out;
  double assigned = 0.0;
  const int max_perms = (d - 1) * (d - 1) + 1;

  for (int step = 0; step < max_perms; ++step) {
    double mx = 0.0;
    for (double v : R.data) mx = std::max(mx, v);
    if (mx <= kMatchTol || assigned >= 1.0 - d * kMatchTol) break;
    std::vector<int> perm;
    if (!detail::perfect_matching(R, kMatchTol, perm))
      throw std::invalid_argument("birkhoff_decompose: no perfect matching on the support; "
                                  "matrix is not doubly stochastic within tolerance");
    double theta = kInf;
    for (int i = 0; i < d; ++i) theta = std::min(theta, R(i, perm[i]));
    for (int i = 0; i < d; ++i) R(i, perm[i]) = std::max(0.0, R(i, perm[i]) - theta);
    out.perms.push_back(std::move(perm));
    out.weights.push_back(theta);
    assigned += theta;
  }
  require(!out.perms.empty(), "birkhoff_decompose: empty decomposition");
  out.weights.back() += 1.0 - assigned;  // fold residual so weights sum to 1
  return out;
}

struct ApproxBvnResult {
  PermutationDecomposition decomposition;  // k-uniform: every weight is 1/k
  double inf_error = 0.0;                  // max_ij |D_ij - D'_ij|
  std::uint64_t sample_count_k = 0;
  int retries_used = 0;
  bool accepted = false;
};

// Sampled Birkhoff-von Neumann: the exact decomposition induces a
// distribution over permutation matrices (vectors in R^{d^2}); k draws at
// the entrywise-p-norm sample bound give a k-uniform decomposition with
// entrywise error <= eps with constant probability per attempt.
inline ApproxBvnResult approx_bvn(const DoublyStochastic& ds, double eps, RngSeed seed,
                                  int max_retries = 32) {
  require(eps > 0.0, "approx_bvn: eps must be > 0");
  require(max_retries >= 1, "approx_bvn: max_retries must be >= 1");
  const int d = ds.dim();
  PermutationDecomposition exact = birkhoff_decompose(ds);

  double p = std::log2(static_cast<double>(std::max(d, 4)));
  double gamma = std::pow(static_cast<double>(d), 1.0 / p);  // entrywise p-norm of any permutation
  ApproxBvnResult out;
  out.sample_count_k = sample_count(p, gamma, eps);

  DiscreteSampler sampler(exact.weights);
  Matrix target = ds.D;
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Rng rng(derive_seed(seed, attempt));
    PermutationDecomposition cand;
    Matrix acc(d, d);
    for (std::uint64_t t = 0; t < out.sample_count_k; ++t) {
      int pick = sampler.draw(rng);
      cand.perms.push_back(exact.perms[pick]);
      cand.weights.push_back(1.0 / static_cast<double>(out.sample_count_k));
      for (int i = 0; i < d; ++i) acc(i, exact.perms[pick][i]) += 1.0;
    }
    double err = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        err = std::max(err, std::fabs(acc(i, j) / static_cast<double>(out.sample_count_k) -
                                      target(i, j)));
    if (attempt == 0 || err < out.inf_error) {
      out.inf_error = err;
      out.decomposition = std::move(cand);
      out.retries_used = attempt + 1;
    }
    if (out.inf_error <= eps) break;
  }
  out.accepted = out.inf_error <= eps;
  return out;
}

// ---------------------------------------------------------------------------
// concurrent closeness and Tverberg / rainbow searches

struct ConcurrentlyCloseResult {
  bool close = false;
  Vec mu;            // best common center found
  double best_f = 0.0;   // max_i dist(mu, conv(V_i))
  double lower_bound = 0.0;
};

namespace detail {

// subgradient of mu -> dist_p(mu, conv(V)) at mu, given the witness hull
// point v (zero when mu is inside the hull)
inline Vec hull_distance_subgradient(const Vec& mu, const Vec& witness, const NormSpec& norm) {
  Vec r = sub(mu, witness);
  Vec g(r.size(), 0.0);
  if (norm.is_inf) {
    size_t jmax = 0;
    for (size_t j = 1; j < r.size(); ++j)
      if (std::fabs(r[j]) > std::fabs(r[jmax])) jmax = j;
    if (r[jmax] != 0.0) g[jmax] = r[jmax] > 0 ? 1.0 : -1.0;
    return g;
  }
  double nr = p_norm(r, norm);
  if (nr == 0.0) return g;
  for (size_t j = 0; j < r.size(); ++j) {
    double a = std::fabs(r[j]);
    if (a == 0.0) continue;
    g[j] = (r[j] > 0 ? 1.0 : -1.0) * std::pow(a / nr, norm.p - 1.0);
  }
  return g;
}

}  // namespace detail

// Decides whether the hulls of `sets` come within eps of one common point,
// by cutting planes on the convex function f(mu) = max_i dist(mu, conv(V_i)):
// each evaluation adds a supporting hyperplane, and the master LP over the
// cuts yields a certified lower bound. YES iff the best f found is within
// eps + solve_tol.
inline ConcurrentlyCloseResult concurrently_close(const std::vector<PointSet>& sets, double eps,
                                                  const NormSpec& norm) {
  require(!sets.empty() && sets.size() <= 6, "concurrently_close: need 1..6 sets");
  const int d = sets[0].dim();
  require(d <= 4, "concurrently_close: dimension must be <= 4");
  for (const PointSet& s : sets) {
    require(s.dim() == d, "concurrently_close: dimension mismatch");
    require(s.size() <= 12, "concurrently_close: sets must have <= 12 points");
  }
  require(eps >= 0.0, "concurrently_close: eps must be >= 0");

  Vec lo(static_cast<size_t>(d), kInf), hi(static_cast<size_t>(d), -kInf);
  Vec centroid(static_cast<size_t>(d), 0.0);
  int total = 0;
  for (const PointSet& s : sets)
    for (const Vec& v : s.points) {
      ++total;
      for (int j = 0; j < d; ++j) {
        lo[j] = std::min(lo[j], v[j]);
        hi[j] = std::max(hi[j], v[j]);
        centroid[j] += v[j];
      }
    }
  for (int j = 0; j < d; ++j) centroid[j] /= total;

  auto evaluate = [&](const Vec& mu, Vec& subgrad) {
    double worst = -kInf;
    Vec worst_witness;
    for (const PointSet& s : sets) {
      HullDistance h = min_norm_over_hull(s, mu, norm);
      if (h.distance > worst) {
        worst = h.distance;
        Vec w(static_cast<size_t>(d), 0.0);
        for (int i = 0; i < s.size(); ++i)
          for (int j = 0; j < d; ++j) w[j] += h.weights[i] * s.points[i][j];
        worst_witness = w;
      }
    }
    subgrad = detail::hull_distance_subgradient(mu, worst_witness, norm);
    return worst;
  };

  Polytope master(d + 1);  // (mu, F)
  for (int j = 0; j < d; ++j) master.set_bounds(j, lo[j] - eps - 1.0, hi[j] + eps + 1.0);
  master.set_bounds(d, 0.0, kInf);
  Vec obj(static_cast<size_t>(d + 1), 0.0);
  obj[d] = 1.0;

  ConcurrentlyCloseResult out;
  Vec mu = centroid;
  out.best_f = kInf;
  for (int round = 0; round < 200; ++round) {
    Vec g;
    double f = evaluate(mu, g);
    if (f < out.best_f) {
      out.best_f = f;
      out.mu = mu;
    }
    if (out.best_f <= eps) break;  // certainly close
    // cut: F >= f + g . (mu' - mu)
    Vec row(static_cast<size_t>(d + 1), 0.0);
    for (int j = 0; j < d; ++j) row[j] = g[j];
    row[d] = -1.0;
    master.add_ineq(row, dot(g, mu) - f);
    LPSolution lp = lp_minimize(obj, master);
    require(lp.status == LPStatus::OPTIMAL, "concurrently_close: master LP failed");
    out.lower_bound = std::max(out.lower_bound, lp.point[d]);
    if (out.lower_bound > eps + kSolveTol) break;               // certainly not close
    if (out.best_f - out.lower_bound <= 1e-9) break;            // resolved to precision
    Vec next(lp.point.begin(), lp.point.begin() + d);
    if (next == mu) break;  // master stalled at the same point
    mu = next;
  }
  out.close = out.best_f <= eps + kSolveTol;
  return out;
}

struct ColorClasses {
  std::vector<PointSet> classes;  // exactly d+1 sets in R^d
  Vec mu;

  ColorClasses(std::vector<PointSet> cls, Vec mu_) : classes(std::move(cls)), mu(std::move(mu_)) {
    require(!classes.empty(), "ColorClasses: empty");
    int d = classes[0].dim();
    require(static_cast<int>(classes.size()) == d + 1, "ColorClasses: need exactly d+1 classes");
    for (const PointSet& s : classes) require(s.dim() == d, "ColorClasses: dimension mismatch");
    require(static_cast<int>(mu.size()) == d, "ColorClasses: mu dimension mismatch");
  }
};

struct RainbowResult {
  std::vector<int> choice;  // one point index per class
  Vec witness_weights;      // convex weights over the rainbow points
  double distance = 0.0;    // dist(mu, conv(rainbow))
};

// Exhaustive lexicographic search for a rainbow whose hull passes within
// eps of mu. Returns the first acceptance; nullopt when none qualifies.
inline std::optional<RainbowResult> find_rainbow(const ColorClasses& cc, double eps,
                                                 const NormSpec& norm) {
  require(eps >= 0.0, "find_rainbow: eps must be >= 0");
  const int classes = static_cast<int>(cc.classes.size());
  double combos = 1.0;
  for (const PointSet& s : cc.classes) combos *= static_cast<double>(s.size());
  require(combos <= 1e6, "find_rainbow: search space too large");

  std::vector<int> choice(static_cast<size_t>(classes), 0);
  while (true) {
    std::vector<Vec> pts;
    pts.reserve(static_cast<size_t>(classes));
    for (int c = 0; c < classes; ++c) pts.push_back(cc.classes[c].points[choice[c]]);
    HullDistance h = min_norm_over_hull(PointSet(pts), cc.mu, norm);
    if (h.distance <= eps) {
      RainbowResult r;
      r.choice = choice;
      r.witness_weights = h.weights;
      r.distance = h.distance;
      return r;
    }
    int c = classes - 1;
    while (c >= 0 && choice[c] == cc.classes[c].size() - 1) --c;
    if (c < 0) return std::nullopt;
    ++choice[c];
    for (int cc2 = c + 1; cc2 < classes; ++cc2) choice[cc2] = 0;
  }
}

struct TverbergInstance {
  PointSet X;
  int r = 2;
  double eps = 0.1;
  NormSpec norm = NormSpec::finite(2.0);

  TverbergInstance(PointSet pts, int r_, double eps_, NormSpec norm_ = NormSpec::finite(2.0))
      : X(std::move(pts)), r(r_), eps(eps_), norm(norm_) {
    require(r >= 2, "Tverberg: r must be >= 2");
    int d = X.dim();
    require(X.size() == (r - 1) * (d + 1) + 1, "Tverberg: need exactly (r-1)(d+1)+1 points");
    require(r <= 3 && d <= 3, "Tverberg: only tiny instances (r <= 3, d <= 3)");
    require(eps >= 0.0, "Tverberg: eps must be >= 0");
  }
};

struct TverbergPartition {
  std::vector<std::vector<int>> parts;  // r disjoint index sets covering X
  Vec mu;                               // common eps-center
  double best_f = 0.0;                  // max_i dist(mu, conv(part_i))
};

// Exhaustive search over assignments of points to r candidate parts of
// size <= t (t from the sampling bound), leftovers unassigned; the first
// concurrently-eps-close family (lexicographic order) is extended to a
// full partition by round-robin assignment of the leftovers.
inline std::optional<TverbergPartition> find_tverberg_partition(const TverbergInstance& inst) {
  const int N = inst.X.size();
  const int r = inst.r;
  double gamma = inst.X.gamma(inst.norm);
  // raw sampling bound capped at |X|; tiny eps would overflow the count
  double raw = 4.0 * inst.norm.p * gamma * gamma /
               std::max(inst.eps * inst.eps, 1e-300);
  std::uint64_t t = (gamma == 0.0)                       ? 1
                    : (raw >= static_cast<double>(N))    ? static_cast<std::uint64_t>(N)
                                                         : static_cast<std::uint64_t>(std::ceil(raw));

  std::vector<int> assign(static_cast<size_t>(N), 0);  // 0 = unassigned, 1..r = part
  while (true) {
    std::vector<std::vector<int>> parts(static_cast<size_t>(r));
    for (int i = 0; i < N; ++i)
      if (assign[i] > 0) parts[assign[i] - 1].push_back(i);
    bool valid = true;
    for (const auto& part : parts)
      if (part.empty() || part.size() > t) {
        valid = false;
        break;
      }
    if (valid) {
      std::vector<PointSet> sets;
      for (const auto& part : parts) {
        std::vector<Vec> pts;
        for (int i : part) pts.push_back(inst.X.points[i]);
        sets.push_back(PointSet(pts));
      }
      ConcurrentlyCloseResult cc = concurrently_close(sets, inst.eps, inst.norm);
      if (cc.close) {
        TverbergPartition out;
        out.parts = parts;
        out.mu = cc.mu;
        out.best_f = cc.best_f;
        int next_part = 0;
        for (int i = 0; i < N; ++i)
          if (assign[i] == 0) {
            out.parts[next_part].push_back(i);
            next_part = (next_part + 1) % r;
          }
        for (auto& part : out.parts) std::sort(part.begin(), part.end());
        return out;
      }
    }
    // next assignment vector in lexicographic order
    int i = N - 1;
    while (i >= 0 && assign[i] == r) --i;
    if (i < 0) return std::nullopt;
    ++assign[i];
    for (int j = i + 1; j < N; ++j) assign[j] = 0;
  }
}

}  // namespace carath
