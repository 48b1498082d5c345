// Solvers for the polytope-constrained subproblems behind the equilibrium
// search: CP(u) = min ||C y - u||  subject to
//     x^T u >= pi1 + pi2 - eps/2,   A y <= 1 pi1,   x^T B <= 1^T pi2,
//     x, y in the simplex,          pi1, pi2 in [-1, 1],
// plus optional rows (welfare floor pi1 + pi2 >= alpha, q-norm cap on x).
//
// The infinity norm is an exact epigraph LP over all variables jointly.
// For finite p the problem splits: the objective touches only y, and the
// x-side constraints couple to the y-side through pi1 alone, with the
// y-side feasible set growing in pi1. So the optimum is attained at the
// largest feasible pi1 (an LP over the x-side, or a bisection when the
// q-norm cap is present), followed by a residual minimization in y by
// away-step Frank-Wolfe.
#pragma once

#include <cmath>
#include <optional>

#include "carath/core.hpp"
#include "carath/frank_wolfe.hpp"
#include "carath/simplex.hpp"

namespace carath {

struct CPInstance {
  Matrix C;
  Vec u;
  Matrix A;
  Matrix B;
  double eps = 0.1;
  NormSpec norm = NormSpec::inf();
  std::optional<double> welfare_floor;  // pi1 + pi2 >= alpha
  std::optional<double> q_norm_cap;     // ||x||_q <= cap with q = norm.q()
};

enum class CPStatus { OPTIMAL, INFEASIBLE };

struct CPSolution {
  CPStatus status = CPStatus::INFEASIBLE;
  Vec x, y;
  double pi1 = 0.0, pi2 = 0.0;
  double residual = 0.0;        // recomputed ||C y - u|| in the requested norm
  double residual_lower = 0.0;  // certified lower bound on the CP optimum
  double qcap_violation = 0.0;
};

namespace detail {

inline void validate_cp(const CPInstance& inst) {
  validate_matrix(inst.C, "CP C");
  validate_matrix(inst.A, "CP A");
  validate_matrix(inst.B, "CP B");
  validate_vector(inst.u, "CP u");
  const int n = inst.C.rows;
  require(inst.C.cols == n && inst.A.rows == n && inst.A.cols == n && inst.B.rows == n &&
              inst.B.cols == n && static_cast<int>(inst.u.size()) == n,
          "CP: dimensions must agree");
  require(inst.eps > 0.0, "CP: eps must be > 0");
}

// gradient of ||x||_q at x (subgradient when some x_i = 0)
inline Vec qnorm_gradient(const Vec& x, double q) {
  double nq = q_norm(x, q);
  Vec g(x.size(), 0.0);
  if (nq == 0.0) return g;
  for (size_t i = 0; i < x.size(); ++i) {
    double a = std::fabs(x[i]);
    if (a == 0.0) continue;
    g[i] = (x[i] > 0 ? 1.0 : -1.0) * std::pow(a / nq, q - 1.0);
  }
  return g;
}

// Exact epigraph LP: variables (x, y, pi1, pi2, t). Extra inequality rows
// over x only (supporting cuts for the q-norm cap) may be supplied.
inline CPSolution solve_cp_inf(const CPInstance& inst, const std::vector<Vec>& x_cuts,
                               const Vec& x_cut_rhs) {
  const int n = inst.C.rows;
  const int ix = 0, iy = n, ip1 = 2 * n, ip2 = 2 * n + 1, it = 2 * n + 2;
  Polytope P(2 * n + 3);
  P.add_simplex_rows(ix, n);
  P.add_simplex_rows(iy, n);
  P.set_bounds(ip1, -1.0, 1.0);
  P.set_bounds(ip2, -1.0, 1.0);
  P.set_bounds(it, 0.0, kInf);

  {  // -x^T u + pi1 + pi2 <= eps/2
    Vec a(static_cast<size_t>(P.dim), 0.0);
    for (int j = 0; j < n; ++j) a[ix + j] = -inst.u[j];
    a[ip1] = 1.0;
    a[ip2] = 1.0;
    P.add_ineq(a, inst.eps / 2.0);
  }
  for (int i = 0; i < n; ++i) {  // (A y)_i <= pi1
    Vec a(static_cast<size_t>(P.dim), 0.0);
    for (int j = 0; j < n; ++j) a[iy + j] = inst.A(i, j);
    a[ip1] = -1.0;
    P.add_ineq(a, 0.0);
  }
  for (int j = 0; j < n; ++j) {  // (B^T x)_j <= pi2
    Vec a(static_cast<size_t>(P.dim), 0.0);
    for (int i = 0; i < n; ++i) a[ix + i] = inst.B(i, j);
    a[ip2] = -1.0;
    P.add_ineq(a, 0.0);
  }
  for (int i = 0; i < n; ++i) {  // +-((C y)_i - u_i) <= t
    Vec a(static_cast<size_t>(P.dim), 0.0);
    for (int j = 0; j < n; ++j) a[iy + j] = inst.C(i, j);
    a[it] = -1.0;
    P.add_ineq(a, inst.u[i]);
    for (int j = 0; j < n; ++j) a[iy + j] = -inst.C(i, j);
    P.add_ineq(a, -inst.u[i]);
  }
  if (inst.welfare_floor) {  // pi1 + pi2 >= alpha
    Vec a(static_cast<size_t>(P.dim), 0.0);
    a[ip1] = -1.0;
    a[ip2] = -1.0;
    P.add_ineq(a, -*inst.welfare_floor);
  }
  for (size_t k = 0; k < x_cuts.size(); ++k) {
    Vec a(static_cast<size_t>(P.dim), 0.0);
    for (int j = 0; j < n; ++j) a[ix + j] = x_cuts[k][j];
    P.add_ineq(a, x_cut_rhs[k]);
  }

  Vec obj(static_cast<size_t>(P.dim), 0.0);
  obj[it] = 1.0;
  LPSolution lp = lp_minimize(obj, P);
  CPSolution sol;
  if (lp.status != LPStatus::OPTIMAL) return sol;
  sol.status = CPStatus::OPTIMAL;
  sol.x.assign(lp.point.begin() + ix, lp.point.begin() + ix + n);
  sol.y.assign(lp.point.begin() + iy, lp.point.begin() + iy + n);
  sol.pi1 = lp.point[ip1];
  sol.pi2 = lp.point[ip2];
  Vec res = sub(mat_vec(inst.C, sol.y), inst.u);
  sol.residual = p_norm(res, NormSpec::inf());
  sol.residual_lower = std::max(0.0, lp.point[it] - kOptTol);
  return sol;
}

// x-side polytope for a fixed pi1, in the x variables only. The pi2
// window max(lower bounds) <= min(upper bounds) expands into linear rows.
inline Polytope x_polytope_at(const CPInstance& inst, double pi1) {
  const int n = inst.C.rows;
  Polytope P(n);
  P.add_simplex_rows(0, n);
  for (int j = 0; j < n; ++j) {
    Vec bcol(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) bcol[i] = inst.B(i, j);
    // (B^T x)_j <= u^T x - pi1 + eps/2
    Vec a = sub(bcol, inst.u);
    P.add_ineq(a, -pi1 + inst.eps / 2.0);
    // (B^T x)_j <= 1
    P.add_ineq(bcol, 1.0);
  }
  {  // pi2 >= -1 must stay below u^T x - pi1 + eps/2
    Vec a = scale(inst.u, -1.0);
    P.add_ineq(a, inst.eps / 2.0 + 1.0 - pi1);
  }
  if (inst.welfare_floor) {  // alpha - pi1 <= u^T x - pi1 + eps/2
    Vec a = scale(inst.u, -1.0);
    P.add_ineq(a, inst.eps / 2.0 - *inst.welfare_floor);
  }
  return P;
}

inline double recover_pi2(const CPInstance& inst, const Vec& x, double pi1) {
  double lo = -1.0;
  for (int j = 0; j < inst.B.cols; ++j) {
    double s = 0.0;
    for (int i = 0; i < inst.B.rows; ++i) s += x[i] * inst.B(i, j);
    lo = std::max(lo, s);
  }
  if (inst.welfare_floor) lo = std::max(lo, *inst.welfare_floor - pi1);
  return lo;
}

struct XSide {
  bool feasible = false;
  Vec x;
  double pi1 = 0.0, pi2 = 0.0;
  double qcap_violation = 0.0;
};

// Largest feasible pi1 over the x-side constraints. Plain LP without the
// q-norm cap; bisection + min-q-norm Frank-Wolfe solves with it.
inline XSide solve_x_side(const CPInstance& inst) {
  const int n = inst.C.rows;
  XSide out;
  if (!inst.q_norm_cap) {
    Polytope P(n + 2);  // (x, pi1, pi2)
    const int ip1 = n, ip2 = n + 1;
    P.add_simplex_rows(0, n);
    P.set_bounds(ip1, -1.0, 1.0);
    P.set_bounds(ip2, -1.0, 1.0);
    Vec a(static_cast<size_t>(n + 2), 0.0);
    for (int j = 0; j < n; ++j) a[j] = -inst.u[j];
    a[ip1] = 1.0;
    a[ip2] = 1.0;
    P.add_ineq(a, inst.eps / 2.0);
    for (int j = 0; j < n; ++j) {
      Vec row(static_cast<size_t>(n + 2), 0.0);
      for (int i = 0; i < n; ++i) row[i] = inst.B(i, j);
      row[ip2] = -1.0;
      P.add_ineq(row, 0.0);
    }
    if (inst.welfare_floor) {
      Vec row(static_cast<size_t>(n + 2), 0.0);
      row[ip1] = -1.0;
      row[ip2] = -1.0;
      P.add_ineq(row, -*inst.welfare_floor);
    }
    Vec obj(static_cast<size_t>(n + 2), 0.0);
    obj[ip1] = 1.0;
    LPSolution lp = lp_maximize(obj, P);
    if (lp.status != LPStatus::OPTIMAL) return out;
    out.feasible = true;
    out.x.assign(lp.point.begin(), lp.point.begin() + n);
    out.pi1 = lp.point[ip1];
    out.pi2 = lp.point[ip2];
    return out;
  }

  const double q = inst.norm.q();
  const double cap = *inst.q_norm_cap;
  const double cap_pow = std::pow(cap, q);
  // min sum |x_i|^q over the x-polytope at pi1; feasible iff value <= cap^q
  auto probe = [&](double pi1) -> std::optional<Vec> {
    Polytope P = x_polytope_at(inst, pi1);
    Vec zero(static_cast<size_t>(n), 0.0);
    LPSolution seed = lp_minimize(zero, P);
    if (seed.status != LPStatus::OPTIMAL) return std::nullopt;
    ResidualObjective obj{Matrix::identity(n), zero, q};
    FWResult fw = minimize_residual(obj, polytope_lmo(P), seed.point, 1e-14, 4000);
    if (fw.value <= cap_pow + 1e-12 || q_norm(fw.x, q) <= cap + 1e-9) return fw.x;
    return std::nullopt;
  };

  double lo = inst.welfare_floor ? std::max(-1.0, *inst.welfare_floor - 1.0) : -1.0;
  if (lo > 1.0) return out;  // welfare floor beyond the payoff box
  auto at_lo = probe(lo);
  if (!at_lo) return out;
  Vec best_x = *at_lo;
  double best_pi1 = lo;
  if (auto at_hi = probe(1.0)) {
    best_x = *at_hi;
    best_pi1 = 1.0;
  } else {
    double hi = 1.0;
    for (int iter = 0; iter < 50 && hi - best_pi1 > 1e-11; ++iter) {
      double mid = 0.5 * (best_pi1 + hi);
      if (auto x = probe(mid)) {
        best_x = *x;
        best_pi1 = mid;
      } else {
        hi = mid;
      }
    }
  }
  out.feasible = true;
  out.x = best_x;
  out.pi1 = best_pi1;
  out.pi2 = recover_pi2(inst, best_x, best_pi1);
  out.qcap_violation = std::max(0.0, q_norm(best_x, q) - cap);
  return out;
}

}  // namespace detail

inline CPSolution solve_cp(const CPInstance& inst) {
  detail::validate_cp(inst);
  const int n = inst.C.rows;

  if (inst.norm.is_inf) {
    std::vector<Vec> cuts;
    Vec cut_rhs;
    CPSolution sol = detail::solve_cp_inf(inst, cuts, cut_rhs);
    if (!inst.q_norm_cap || sol.status != CPStatus::OPTIMAL) return sol;
    const double q = inst.norm.q();
    for (int round = 0; round < 100; ++round) {
      double viol = q_norm(sol.x, q) - *inst.q_norm_cap;
      if (viol <= 1e-9) {
        sol.qcap_violation = std::max(0.0, viol);
        return sol;
      }
      Vec w = detail::qnorm_gradient(sol.x, q);
      cuts.push_back(w);
      cut_rhs.push_back(*inst.q_norm_cap);
      sol = detail::solve_cp_inf(inst, cuts, cut_rhs);
      if (sol.status != CPStatus::OPTIMAL) return sol;
    }
    sol.qcap_violation = std::max(0.0, q_norm(sol.x, q) - *inst.q_norm_cap);
    return sol;
  }

  // finite p: x-side first, then the y-side residual minimization
  detail::XSide xs = detail::solve_x_side(inst);
  CPSolution sol;
  if (!xs.feasible) return sol;

  Polytope Y(n);
  Y.add_simplex_rows(0, n);
  for (int i = 0; i < n; ++i) {
    Vec a(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) a[j] = inst.A(i, j);
    Y.add_ineq(a, xs.pi1);
  }
  Vec zero(static_cast<size_t>(n), 0.0);
  LPSolution seed = lp_minimize(zero, Y);
  if (seed.status != LPStatus::OPTIMAL) return sol;  // no y for any pi1 <= pi1_max

  ResidualObjective obj{inst.C, inst.u, inst.norm.p};
  FWResult fw = minimize_residual(obj, polytope_lmo(Y), seed.point, 1e-14, 4000);

  sol.status = CPStatus::OPTIMAL;
  sol.x = xs.x;
  sol.y = fw.x;
  sol.pi1 = xs.pi1;
  sol.pi2 = xs.pi2;
  sol.qcap_violation = xs.qcap_violation;
  sol.residual = p_norm(sub(mat_vec(inst.C, sol.y), inst.u), inst.norm);
  sol.residual_lower = std::pow(std::max(0.0, fw.value - fw.gap), 1.0 / inst.norm.p);
  return sol;
}

struct HullDistance {
  double distance = 0.0;
  Vec weights;
};

// Distance from `target` to conv(X) in the given norm, with witnessing
// convex weights over the points of X.
inline HullDistance min_norm_over_hull(const PointSet& X, const Vec& target, const NormSpec& norm) {
  require(static_cast<int>(target.size()) == X.dim(), "min_norm_over_hull: dimension mismatch");
  const int n = X.size(), d = X.dim();
  Matrix M(d, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < d; ++i) M(i, j) = X.points[j][i];

  HullDistance out;
  if (norm.is_inf) {
    Polytope P(n + 1);  // (lambda, t)
    P.add_simplex_rows(0, n);
    P.set_bounds(n, 0.0, kInf);
    for (int i = 0; i < d; ++i) {
      Vec a(static_cast<size_t>(n + 1), 0.0);
      for (int j = 0; j < n; ++j) a[j] = M(i, j);
      a[n] = -1.0;
      P.add_ineq(a, target[i]);
      for (int j = 0; j < n; ++j) a[j] = -M(i, j);
      P.add_ineq(a, -target[i]);
    }
    Vec obj(static_cast<size_t>(n + 1), 0.0);
    obj[n] = 1.0;
    LPSolution lp = lp_minimize(obj, P);
    require(lp.status == LPStatus::OPTIMAL, "min_norm_over_hull: LP failed");
    out.weights.assign(lp.point.begin(), lp.point.begin() + n);
    Vec rec(static_cast<size_t>(d), 0.0);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < d; ++i) rec[i] += out.weights[j] * M(i, j);
    out.distance = p_norm(sub(rec, target), norm);
    return out;
  }

  // seed at the single closest point of X
  int best = 0;
  double bestd = kInf;
  for (int j = 0; j < n; ++j) {
    double dj = p_norm(sub(X.points[j], target), norm);
    if (dj < bestd) {
      bestd = dj;
      best = j;
    }
  }
  Vec x0(static_cast<size_t>(n), 0.0);
  x0[best] = 1.0;
  ResidualObjective obj{M, target, norm.p};
  FWResult fw = minimize_residual(obj, simplex_lmo(n), x0, 1e-15, 4000);
  out.weights = fw.x;
  out.distance = std::pow(fw.value, 1.0 / norm.p);
  return out;
}

}  // namespace carath
