// Dense two-phase tableau simplex over a general polytope
//   { z : A_ub z <= b_ub, A_eq z = b_eq, lo <= z <= hi }.
// Templated on the scalar type so the identical pivot path can run in
// double (default) or in exact rational arithmetic (referee mode, see
// rational.hpp). Pivoting is deterministic: Dantzig with lowest-index
// ties, switching permanently to Bland's rule after an iteration
// threshold to rule out cycling.
#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "carath/core.hpp"

namespace carath {

enum class LPStatus { OPTIMAL, INFEASIBLE, UNBOUNDED };

struct Polytope {
  int dim = 0;
  std::vector<Vec> ineq_a;  // rows: a . z <= b
  Vec ineq_b;
  std::vector<Vec> eq_a;  // rows: a . z == b
  Vec eq_b;
  Vec lo, hi;  // per-coordinate box; +-inf allowed

  explicit Polytope(int d = 0)
      : dim(d), lo(static_cast<size_t>(d), -kInf), hi(static_cast<size_t>(d), kInf) {}

  void add_ineq(Vec a, double b) {
    require(static_cast<int>(a.size()) == dim, "Polytope: row dimension mismatch");
    ineq_a.push_back(std::move(a));
    ineq_b.push_back(b);
  }
  void add_eq(Vec a, double b) {
    require(static_cast<int>(a.size()) == dim, "Polytope: row dimension mismatch");
    eq_a.push_back(std::move(a));
    eq_b.push_back(b);
  }
  void set_bounds(int j, double l, double h) {
    require(j >= 0 && j < dim, "Polytope: bad coordinate");
    require(l <= h, "Polytope: lo must be <= hi");
    lo[j] = l;
    hi[j] = h;
  }

  // probability simplex over coordinates [first, first+count)
  void add_simplex_rows(int first, int count) {
    Vec a(static_cast<size_t>(dim), 0.0);
    for (int j = first; j < first + count; ++j) {
      a[j] = 1.0;
      set_bounds(j, 0.0, 1.0);
    }
    add_eq(a, 1.0);
  }
};

struct LPSolution {
  Vec point;
  double objective = 0.0;
  LPStatus status = LPStatus::INFEASIBLE;
};

template <class S>
struct LPTraits;

template <>
struct LPTraits<double> {
  static double from_double(double x) { return x; }
  static double to_double(double x) { return x; }
  static bool is_pos(double x) { return x > 1e-11; }
  static bool is_neg(double x) { return x < -1e-11; }
  static bool pivotable(double x) { return std::fabs(x) > 1e-7; }
  static bool feasible_zero(double x) { return std::fabs(x) <= 1e-9; }
};

namespace detail {

template <class S>
struct Tableau {
  int rows = 0, cols = 0;  // cols excludes rhs
  std::vector<std::vector<S>> a;
  std::vector<S> rhs;
  std::vector<int> basis;    // basic column per row
  std::vector<bool> banned;  // artificials may never re-enter
  long long pivots = 0;

  void pivot(int pr, int pc) {
    S inv = S(1) / a[pr][pc];
    for (int j = 0; j < cols; ++j) a[pr][j] = a[pr][j] * inv;
    rhs[pr] = rhs[pr] * inv;
    a[pr][pc] = S(1);
    for (int i = 0; i < rows; ++i) {
      if (i == pr) continue;
      S f = a[i][pc];
      if (f == S(0)) continue;
      for (int j = 0; j < cols; ++j) a[i][j] = a[i][j] - f * a[pr][j];
      a[i][pc] = S(0);
      rhs[i] = rhs[i] - f * rhs[pr];
    }
    ++pivots;
  }
};

// One simplex phase minimizing the reduced-cost row `cost`.
// Returns false when the phase objective is unbounded below.
template <class S>
bool run_phase(Tableau<S>& t, std::vector<S>& cost, S& cost_rhs, long long bland_after,
               long long max_pivots) {
  while (true) {
    require(t.pivots < max_pivots, "simplex: pivot limit exceeded");
    bool bland = t.pivots >= bland_after;
    int enter = -1;
    if (bland) {
      for (int j = 0; j < t.cols; ++j)
        if (!t.banned[j] && LPTraits<S>::is_neg(cost[j])) {
          enter = j;
          break;
        }
    } else {
      S best = S(0);
      for (int j = 0; j < t.cols; ++j)
        if (!t.banned[j] && LPTraits<S>::is_neg(cost[j]) && cost[j] < best) {
          best = cost[j];
          enter = j;
        }
    }
    if (enter < 0) return true;  // optimal

    int leave = -1;
    S best_ratio = S(0);
    for (int i = 0; i < t.rows; ++i) {
      if (!LPTraits<S>::is_pos(t.a[i][enter])) continue;
      S ratio = t.rhs[i] / t.a[i][enter];
      if (leave < 0 || ratio < best_ratio ||
          (ratio == best_ratio && t.basis[i] < t.basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave < 0) return false;  // unbounded

    t.pivot(leave, enter);
    S f = cost[enter];
    if (f != S(0)) {
      for (int j = 0; j < t.cols; ++j) cost[j] = cost[j] - f * t.a[leave][j];
      cost[enter] = S(0);
      cost_rhs = cost_rhs - f * t.rhs[leave];
    }
    t.basis[leave] = enter;
  }
}

}  // namespace detail

// sense: +1 minimize, -1 maximize.
template <class S>
LPSolution solve_lp_impl(const Vec& objective, const Polytope& P, int sense) {
  using T = LPTraits<S>;
  const int n = P.dim;
  require(static_cast<int>(objective.size()) == n, "solve_lp: objective dimension mismatch");

  // Variable transform to x >= 0:
  //  kind 0: z = lo + x    (lo finite; finite hi becomes an upper-bound row)
  //  kind 1: z = hi - x    (only hi finite)
  //  kind 2: z = x+ - x-   (both infinite; x- appended at split_col)
  std::vector<int> kind(static_cast<size_t>(n));
  std::vector<int> split_col(static_cast<size_t>(n), -1);
  int nx = n;
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(P.lo[j]))
      kind[j] = 0;
    else if (std::isfinite(P.hi[j]))
      kind[j] = 1;
    else {
      kind[j] = 2;
      split_col[j] = nx++;
    }
  }

  std::vector<std::vector<S>> rows;
  std::vector<S> rhs;
  std::vector<int> row_kind;  // 0: <=, 1: ==

  auto push_row = [&](const Vec& a, double b, int rk) {
    std::vector<S> r(static_cast<size_t>(nx), S(0));
    S bb = T::from_double(b);
    for (int j = 0; j < n; ++j) {
      if (a[j] == 0.0) continue;
      S coef = T::from_double(a[j]);
      switch (kind[j]) {
        case 0:
          r[j] = r[j] + coef;
          bb = bb - coef * T::from_double(P.lo[j]);
          break;
        case 1:
          r[j] = r[j] - coef;
          bb = bb - coef * T::from_double(P.hi[j]);
          break;
        default:
          r[j] = r[j] + coef;
          r[split_col[j]] = r[split_col[j]] - coef;
      }
    }
    rows.push_back(std::move(r));
    rhs.push_back(bb);
    row_kind.push_back(rk);
  };

  for (size_t i = 0; i < P.ineq_a.size(); ++i) push_row(P.ineq_a[i], P.ineq_b[i], 0);
  for (size_t i = 0; i < P.eq_a.size(); ++i) push_row(P.eq_a[i], P.eq_b[i], 1);
  for (int j = 0; j < n; ++j) {
    if (kind[j] == 0 && std::isfinite(P.hi[j]) && P.hi[j] > P.lo[j]) {
      Vec a(static_cast<size_t>(n), 0.0);
      a[j] = 1.0;
      push_row(a, P.hi[j], 0);
    } else if (kind[j] == 0 && P.hi[j] == P.lo[j]) {
      // pinned variable: x = 0 after the shift, enforced by an equality
      Vec a(static_cast<size_t>(n), 0.0);
      a[j] = 1.0;
      push_row(a, P.hi[j], 1);
    }
  }

  const int m = static_cast<int>(rows.size());
  int n_slack = 0;
  for (int rk : row_kind) n_slack += (rk == 0) ? 1 : 0;

  detail::Tableau<S> t;
  t.rows = m;
  std::vector<int> art_of_row(static_cast<size_t>(m), -1);
  std::vector<int> slack_of_row(static_cast<size_t>(m), -1);
  std::vector<bool> negated(static_cast<size_t>(m), false);
  int col_slack = nx;
  int col_art;
  int n_art = 0;
  {
    int sc = 0;
    for (int i = 0; i < m; ++i) {
      if (rhs[i] < S(0)) {
        negated[i] = true;
        for (auto& v : rows[i]) v = -v;
        rhs[i] = -rhs[i];
      }
      if (row_kind[i] == 0) slack_of_row[i] = col_slack + sc++;
    }
    col_art = nx + n_slack;
    for (int i = 0; i < m; ++i) {
      bool slack_basic = row_kind[i] == 0 && !negated[i];
      if (!slack_basic) art_of_row[i] = col_art + n_art++;
    }
  }

  t.cols = col_art + n_art;
  t.a.assign(static_cast<size_t>(m), std::vector<S>(static_cast<size_t>(t.cols), S(0)));
  t.rhs = rhs;
  t.basis.assign(static_cast<size_t>(m), -1);
  t.banned.assign(static_cast<size_t>(t.cols), false);

  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < nx; ++j) t.a[i][j] = rows[i][j];
    if (slack_of_row[i] >= 0) t.a[i][slack_of_row[i]] = negated[i] ? S(-1) : S(1);
    if (art_of_row[i] >= 0) {
      t.a[i][art_of_row[i]] = S(1);
      t.basis[i] = art_of_row[i];
    } else {
      t.basis[i] = slack_of_row[i];
    }
  }

  const long long bland_after = 4LL * (m + t.cols) + 64;
  const long long max_pivots = 200000 + 200LL * (m + t.cols);

  if (n_art > 0) {
    std::vector<S> cost(static_cast<size_t>(t.cols), S(0));
    S cost_rhs = S(0);
    for (int i = 0; i < m; ++i) {
      if (art_of_row[i] < 0) continue;
      for (int j = 0; j < t.cols; ++j) cost[j] = cost[j] - t.a[i][j];
      cost_rhs = cost_rhs - t.rhs[i];
    }
    for (int k = col_art; k < t.cols; ++k) cost[k] = S(0);
    bool ok = detail::run_phase(t, cost, cost_rhs, bland_after, max_pivots);
    require(ok, "simplex: phase-1 unbounded (internal error)");
    S phase1 = -cost_rhs;  // = sum of artificials at the final basis
    if (!T::feasible_zero(phase1)) {
      LPSolution bad;
      bad.status = LPStatus::INFEASIBLE;
      return bad;
    }
    for (int i = 0; i < m; ++i) {
      if (t.basis[i] < col_art) continue;
      int enter = -1;
      for (int j = 0; j < col_art; ++j)
        if (T::pivotable(t.a[i][j])) {
          enter = j;
          break;
        }
      if (enter >= 0) {
        t.pivot(i, enter);
        t.basis[i] = enter;
      }
      // otherwise the row is (near-)redundant: the artificial stays basic
      // at zero and every enterable column has a zero entry in this row
    }
    for (int k = col_art; k < t.cols; ++k) t.banned[k] = true;
  }

  std::vector<S> cost(static_cast<size_t>(t.cols), S(0));
  S cost_rhs = S(0);
  {
    S sg = sense >= 0 ? S(1) : S(-1);
    for (int j = 0; j < n; ++j) {
      if (objective[j] == 0.0) continue;
      S coef = sg * T::from_double(objective[j]);
      switch (kind[j]) {
        case 0:
          cost[j] = cost[j] + coef;
          break;
        case 1:
          cost[j] = cost[j] - coef;
          break;
        default:
          cost[j] = cost[j] + coef;
          cost[split_col[j]] = cost[split_col[j]] - coef;
      }
    }
    for (int i = 0; i < m; ++i) {
      S f = cost[t.basis[i]];
      if (f == S(0)) continue;
      for (int j = 0; j < t.cols; ++j) cost[j] = cost[j] - f * t.a[i][j];
      cost[t.basis[i]] = S(0);
      cost_rhs = cost_rhs - f * t.rhs[i];
    }
  }
  bool ok = detail::run_phase(t, cost, cost_rhs, bland_after, max_pivots);
  if (!ok) {
    LPSolution u;
    u.status = LPStatus::UNBOUNDED;
    return u;
  }

  std::vector<S> xval(static_cast<size_t>(nx), S(0));
  for (int i = 0; i < m; ++i)
    if (t.basis[i] < nx) xval[t.basis[i]] = t.rhs[i];

  LPSolution sol;
  sol.status = LPStatus::OPTIMAL;
  sol.point.resize(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    double xj = T::to_double(xval[j]);
    switch (kind[j]) {
      case 0:
        sol.point[j] = P.lo[j] + xj;
        break;
      case 1:
        sol.point[j] = P.hi[j] - xj;
        break;
      default:
        sol.point[j] = xj - T::to_double(xval[split_col[j]]);
    }
  }
  sol.objective = dot(objective, sol.point);
  return sol;
}

inline LPSolution lp_minimize(const Vec& objective, const Polytope& P) {
  return solve_lp_impl<double>(objective, P, +1);
}
inline LPSolution lp_maximize(const Vec& objective, const Polytope& P) {
  return solve_lp_impl<double>(objective, P, -1);
}

// Largest violation of the polytope constraints at z (0 when feasible).
inline double polytope_violation(const Polytope& P, const Vec& z) {
  double v = 0.0;
  for (size_t i = 0; i < P.ineq_a.size(); ++i) v = std::max(v, dot(P.ineq_a[i], z) - P.ineq_b[i]);
  for (size_t i = 0; i < P.eq_a.size(); ++i) v = std::max(v, std::fabs(dot(P.eq_a[i], z) - P.eq_b[i]));
  for (int j = 0; j < P.dim; ++j) {
    if (std::isfinite(P.lo[j])) v = std::max(v, P.lo[j] - z[j]);
    if (std::isfinite(P.hi[j])) v = std::max(v, z[j] - P.hi[j]);
  }
  return v;
}

}  // namespace carath
