// Sparsity lower bound over the standard basis: every convex combination
// of fewer than 1/(4 eps^{p/(p-1)}) basis vectors stays p-distance > eps
// from the barycenter (1/d, ..., 1/d). The optimal combination of k basis
// vectors puts weight 1/k on each, giving the closed-form distance below.
#pragma once

#include <cmath>
#include <vector>

#include "carath/core.hpp"

namespace carath {

struct LowerBoundCase {
  int d = 0;
  double p = 2.0;
  double eps = 0.1;

  LowerBoundCase(int d_, double p_, double eps_) : d(d_), p(p_), eps(eps_) {
    require(d >= 1, "LowerBoundCase: d must be >= 1");
    require(p >= 2.0, "LowerBoundCase: p must be >= 2");
    require(eps > 0.0 && eps < 1.0, "LowerBoundCase: eps must be in (0, 1)");
    // boundary case 1/eps^{p/(p-1)} == d kept: the sweep stays valid there
    require(std::pow(eps, -p / (p - 1.0)) <= static_cast<double>(d) * (1.0 + 1e-12),
            "LowerBoundCase: requires 1/eps^{p/(p-1)} <= d");
  }

  double k_threshold() const { return 0.25 * std::pow(eps, -p / (p - 1.0)); }
};

// exact minimum p-distance from the barycenter to conv of k basis vectors:
// ( k (1/k - 1/d)^p + (d - k) (1/d)^p )^{1/p}
inline double best_k_uniform_distance(int d, int k, double p) {
  require(d >= 1 && k >= 1 && k <= d, "best_k_uniform_distance: need 1 <= k <= d");
  require(p >= 2.0, "best_k_uniform_distance: p must be >= 2");
  double kk = static_cast<double>(k), dd = static_cast<double>(d);
  double head = kk * std::pow(1.0 / kk - 1.0 / dd, p);
  double tail = (dd - kk) * std::pow(1.0 / dd, p);
  return std::pow(head + tail, 1.0 / p);
}

struct LowerBoundRow {
  int k = 0;
  double distance = 0.0;
  double margin = 0.0;  // distance - eps; must be > 0
};

struct LowerBoundReport {
  LowerBoundCase lb_case;
  std::vector<LowerBoundRow> rows;  // one per k < k_threshold
  bool all_pass = false;
};

inline LowerBoundReport verify_lower_bound(const LowerBoundCase& c) {
  LowerBoundReport rep{c, {}, true};
  for (int k = 1; static_cast<double>(k) < c.k_threshold(); ++k) {
    LowerBoundRow row;
    row.k = k;
    row.distance = best_k_uniform_distance(c.d, k, c.p);
    row.margin = row.distance - c.eps;
    if (!(row.distance > c.eps)) rep.all_pass = false;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace carath
