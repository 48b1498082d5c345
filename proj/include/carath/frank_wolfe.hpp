// Conditional-gradient (Frank-Wolfe) solvers for objectives of the form
//   F(z) = sum_i |(M z - c)_i|^rho,   rho in (1, inf),
// over a polytope given through a linear minimization oracle. Quadratic
// instances (rho = 2) run the fully-corrective scheme with a min-norm-point
// active-set correction, which the hull-distance tolerances downstream
// require; other exponents take pairwise steps with a golden-section line
// search (F is convex along any segment).
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "carath/core.hpp"
#include "carath/simplex.hpp"

namespace carath {

using Lmo = std::function<Vec(const Vec& gradient)>;

struct FWResult {
  Vec x;
  double value = 0.0;  // F at x, recomputed fresh
  double gap = 0.0;    // final Frank-Wolfe gap; F(x) - gap lower-bounds F*
  int iterations = 0;
  bool converged = false;
};

namespace detail {

inline double pow_abs(double r, double rho) { return std::pow(std::fabs(r), rho); }

inline double residual_value(const Vec& r, double rho) {
  double s = 0.0;
  for (double v : r) s += pow_abs(v, rho);
  return s;
}

// d/dr |r|^rho = rho sign(r) |r|^(rho-1)
inline Vec residual_grad(const Vec& r, double rho) {
  Vec g(r.size());
  for (size_t i = 0; i < r.size(); ++i) {
    double a = std::fabs(r[i]);
    g[i] = (a == 0.0) ? 0.0 : rho * (r[i] > 0 ? 1.0 : -1.0) * std::pow(a, rho - 1.0);
  }
  return g;
}

// minimize F(gamma) = sum |r_i + gamma w_i|^rho over [0, gmax]
inline double segment_linesearch(const Vec& r, const Vec& w, double rho, double gmax) {
  if (rho == 2.0) {
    double ww = dot(w, w);
    if (ww == 0.0) return gmax;
    double g = -dot(r, w) / ww;
    return std::clamp(g, 0.0, gmax);
  }
  auto f = [&](double g) {
    double s = 0.0;
    for (size_t i = 0; i < r.size(); ++i) s += pow_abs(r[i] + g * w[i], rho);
    return s;
  };
  double lo = 0.0, hi = gmax;
  const double phi = 0.6180339887498949;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 90 && hi - lo > 1e-16 * (1.0 + gmax); ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = f(x2);
    }
  }
  double mid = 0.5 * (lo + hi);
  // endpoints can win when the minimum sits on the boundary
  if (f(0.0) <= f(mid) && f(0.0) <= f(gmax)) return 0.0;
  if (f(gmax) <= f(mid)) return gmax;
  return mid;
}

}  // namespace detail

struct ResidualObjective {
  Matrix M;
  Vec c;
  double rho = 2.0;

  Vec residual(const Vec& z) const { return sub(mat_vec(M, z), c); }
  double value(const Vec& z) const { return detail::residual_value(residual(z), rho); }
  Vec gradient_from_residual(const Vec& r) const {
    return vec_mat(detail::residual_grad(r, rho), M);
  }
};

// Pairwise variant of the away-step rule: each step shifts mass from the
// worst active atom directly onto the Frank-Wolfe vertex, which kills the
// zigzag between face vertices when the optimum sits on a face.
// x0 must be a feasible vertex (or any feasible point; it seeds the active set).
inline FWResult pairwise_frank_wolfe(const ResidualObjective& obj, const Lmo& lmo, const Vec& x0,
                                     double gap_tol, int max_iters) {
  std::vector<Vec> atoms{x0};
  Vec weights{1.0};
  Vec x = x0;
  Vec r = obj.residual(x);

  FWResult out;
  int it = 0;
  for (; it < max_iters; ++it) {
    Vec g = obj.gradient_from_residual(r);
    Vec s = lmo(g);
    double fw_gap = dot(g, x) - dot(g, s);
    out.gap = fw_gap;
    if (fw_gap <= gap_tol) {
      out.converged = true;
      break;
    }

    // strongest away atom under the current gradient
    size_t away = 0;
    double best = -kInf;
    for (size_t a = 0; a < atoms.size(); ++a) {
      double v = dot(g, atoms[a]);
      if (v > best) {
        best = v;
        away = a;
      }
    }

    bool pairwise = !(atoms[away] == s);
    Vec dir;
    double gmax;
    if (pairwise) {
      dir = sub(s, atoms[away]);
      gmax = weights[away];
    } else {
      dir = sub(s, x);
      gmax = 1.0;
    }

    Vec w = mat_vec(obj.M, dir);
    double gamma = detail::segment_linesearch(r, w, obj.rho, gmax);
    if (gamma <= 0.0) break;  // numerically stuck; gap is reported honestly

    if (pairwise) {
      weights[away] -= gamma;
    } else {
      for (double& wv : weights) wv *= (1.0 - gamma);
    }
    {
      bool found = false;
      for (size_t a = 0; a < atoms.size(); ++a) {
        if (atoms[a] == s) {
          weights[a] += gamma;
          found = true;
          break;
        }
      }
      if (!found) {
        atoms.push_back(s);
        weights.push_back(gamma);
      }
    }
    for (size_t i = 0; i < x.size(); ++i) x[i] += gamma * dir[i];
    for (size_t i = 0; i < r.size(); ++i) r[i] += gamma * w[i];

    // prune dead atoms and periodically resync x against the atom set
    for (size_t a = atoms.size(); a-- > 0;) {
      if (weights[a] <= 1e-14) {
        atoms.erase(atoms.begin() + static_cast<long>(a));
        weights.erase(weights.begin() + static_cast<long>(a));
      }
    }
    if ((it & 63) == 63) {
      double ws = 0.0;
      for (double wv : weights) ws += wv;
      std::fill(x.begin(), x.end(), 0.0);
      for (size_t a = 0; a < atoms.size(); ++a)
        for (size_t i = 0; i < x.size(); ++i) x[i] += (weights[a] / ws) * atoms[a][i];
      r = obj.residual(x);
    }
  }
  out.iterations = it;
  out.x = x;
  out.value = obj.value(x);
  return out;
}

namespace detail {

// min || Q alpha - c ||^2 over the probability simplex in alpha, by the
// min-norm-point active-set scheme: repeatedly solve the affine-hull
// least squares and clip back to the simplex, dropping atoms at zero.
// The sum constraint is eliminated by substitution (alpha_last = 1 - sum
// of the rest) so the affine solution sums to 1 by construction even on
// ill-conditioned atom sets. Q holds the mapped atoms; lambda enters
// feasible and leaves feasible.
inline void mnp_correction(const std::vector<Vec>& q, const Vec& c, Vec& lambda) {
  const size_t k = q.size();
  std::vector<char> active(k, 1);

  for (size_t guard = 0; guard <= 2 * k + 4; ++guard) {
    std::vector<size_t> idx;
    for (size_t a = 0; a < k; ++a)
      if (active[a]) idx.push_back(a);
    const size_t m = idx.size();
    if (m == 0) return;
    if (m == 1) {
      for (size_t a = 0; a < k; ++a) lambda[a] = 0.0;
      lambda[idx[0]] = 1.0;
      return;
    }
    // alpha = e_last + sum_a beta_a (q_a - q_last); reduced normal equations
    const size_t mr = m - 1;
    const Vec& q_last = q[idx[mr]];
    std::vector<Vec> B(mr);
    for (size_t a = 0; a < mr; ++a) B[a] = sub(q[idx[a]], q_last);
    Vec rhs0 = sub(c, q_last);
    std::vector<Vec> Msys(mr, Vec(mr + 1, 0.0));
    double ridge = 0.0;
    for (size_t a = 0; a < mr; ++a) ridge += dot(B[a], B[a]);
    ridge = (ridge / mr + 1.0) * 1e-12;
    for (size_t a = 0; a < mr; ++a) {
      for (size_t b = 0; b < mr; ++b) Msys[a][b] = dot(B[a], B[b]);
      Msys[a][a] += ridge;
      Msys[a][mr] = dot(B[a], rhs0);
    }
    // Gaussian elimination with partial pivoting
    for (size_t col = 0; col < mr; ++col) {
      size_t piv = col;
      for (size_t rr = col + 1; rr < mr; ++rr)
        if (std::fabs(Msys[rr][col]) > std::fabs(Msys[piv][col])) piv = rr;
      if (std::fabs(Msys[piv][col]) < 1e-300) return;  // keep current lambda
      std::swap(Msys[col], Msys[piv]);
      for (size_t rr = 0; rr < mr; ++rr) {
        if (rr == col) continue;
        double f = Msys[rr][col] / Msys[col][col];
        if (f == 0.0) continue;
        for (size_t cc = col; cc <= mr; ++cc) Msys[rr][cc] -= f * Msys[col][cc];
      }
    }
    Vec alpha(m);
    double beta_sum = 0.0;
    for (size_t a = 0; a < mr; ++a) {
      alpha[a] = Msys[a][mr] / Msys[a][a];
      beta_sum += alpha[a];
    }
    alpha[mr] = 1.0 - beta_sum;

    double amin = 0.0;
    for (size_t a = 0; a < m; ++a) amin = std::min(amin, alpha[a]);
    if (amin >= -1e-12) {
      for (size_t a = 0; a < k; ++a) lambda[a] = 0.0;
      for (size_t a = 0; a < m; ++a) lambda[idx[a]] = std::max(0.0, alpha[a]);
      return;
    }
    // step from lambda toward alpha until the first coordinate hits zero
    double theta = 1.0;
    for (size_t a = 0; a < m; ++a) {
      double la = lambda[idx[a]];
      if (alpha[a] < la)
        theta = std::min(theta, la / (la - alpha[a]));
    }
    for (size_t a = 0; a < m; ++a) {
      double la = lambda[idx[a]];
      double nv = la + theta * (alpha[a] - la);
      lambda[idx[a]] = nv;
      if (nv <= 1e-14) {
        lambda[idx[a]] = 0.0;
        active[idx[a]] = 0;
      }
    }
  }
}

}  // namespace detail

// Fully-corrective scheme for rho = 2: each Frank-Wolfe vertex is added to
// the atom pool and the quadratic is re-optimized exactly over the pool.
inline FWResult fully_corrective_quadratic(const ResidualObjective& obj, const Lmo& lmo,
                                           const Vec& x0, double gap_tol, int max_iters) {
  std::vector<Vec> atoms{x0};
  std::vector<Vec> mapped{mat_vec(obj.M, x0)};
  Vec lambda{1.0};
  Vec x = x0;
  Vec r = obj.residual(x);

  FWResult out;
  int it = 0;
  int stalls = 0;
  double prev_value = detail::residual_value(r, obj.rho);
  for (; it < max_iters; ++it) {
    Vec g = obj.gradient_from_residual(r);
    Vec s = lmo(g);
    double fw_gap = dot(g, x) - dot(g, s);
    out.gap = fw_gap;
    if (fw_gap <= gap_tol) {
      out.converged = true;
      break;
    }
    bool present = false;
    for (const Vec& a : atoms)
      if (a == s) {
        present = true;
        break;
      }
    if (present) {
      // the pool is already optimal and the oracle returns nothing new:
      // the remaining gap is arithmetic noise
      out.converged = true;
      break;
    }
    atoms.push_back(s);
    mapped.push_back(mat_vec(obj.M, s));
    lambda.push_back(0.0);
    detail::mnp_correction(mapped, obj.c, lambda);
    // rebuild the iterate from the corrected weights, dropping dead atoms
    std::vector<Vec> na, nm;
    Vec nl;
    for (size_t a = 0; a < atoms.size(); ++a) {
      if (lambda[a] > 0.0) {
        na.push_back(std::move(atoms[a]));
        nm.push_back(std::move(mapped[a]));
        nl.push_back(lambda[a]);
      }
    }
    atoms = std::move(na);
    mapped = std::move(nm);
    lambda = std::move(nl);
    std::fill(x.begin(), x.end(), 0.0);
    for (size_t a = 0; a < atoms.size(); ++a)
      for (size_t i = 0; i < x.size(); ++i) x[i] += lambda[a] * atoms[a][i];
    r = obj.residual(x);
    double value = detail::residual_value(r, obj.rho);
    if (value >= prev_value - 1e-15 * (1.0 + prev_value)) {
      if (++stalls >= 2) break;  // correction stopped making progress
    } else {
      stalls = 0;
    }
    prev_value = value;
  }
  out.iterations = it;
  out.x = x;
  out.value = obj.value(x);
  return out;
}

// Dispatch: exact corrective path for quadratics, pairwise steps otherwise.
inline FWResult minimize_residual(const ResidualObjective& obj, const Lmo& lmo, const Vec& x0,
                                  double gap_tol, int max_iters) {
  if (obj.rho == 2.0) return fully_corrective_quadratic(obj, lmo, x0, gap_tol, max_iters);
  return pairwise_frank_wolfe(obj, lmo, x0, gap_tol, max_iters);
}

inline Lmo polytope_lmo(const Polytope& P) {
  return [&P](const Vec& g) {
    LPSolution s = lp_minimize(g, P);
    require(s.status == LPStatus::OPTIMAL, "frank_wolfe: oracle LP not optimal");
    return s.point;
  };
}

// argmin over the plain probability simplex: cheapest-coordinate vertex
inline Lmo simplex_lmo(int n) {
  return [n](const Vec& g) {
    int best = 0;
    for (int j = 1; j < n; ++j)
      if (g[j] < g[best]) best = j;
    Vec v(static_cast<size_t>(n), 0.0);
    v[best] = 1.0;
    return v;
  };
}

}  // namespace carath
