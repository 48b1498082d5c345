// Exact rational arithmetic pieces: LP referee instantiation and helpers
// shared by the support-enumeration oracle and the 0-or-1/k rounding.
#pragma once

#include <gmpxx.h>

#include <vector>

#include "carath/core.hpp"
#include "carath/simplex.hpp"

namespace carath {

using Rat = mpq_class;
using RatVec = std::vector<Rat>;

template <>
struct LPTraits<Rat> {
  static Rat from_double(double x) { return Rat(x); }
  static double to_double(const Rat& x) { return x.get_d(); }
  static bool is_pos(const Rat& x) { return sgn(x) > 0; }
  static bool is_neg(const Rat& x) { return sgn(x) < 0; }
  static bool pivotable(const Rat& x) { return sgn(x) != 0; }
  static bool feasible_zero(const Rat& x) { return sgn(x) == 0; }
};

// Exact-rational LP solve. Inputs are doubles (exact binary rationals);
// the returned point is rounded back to double.
inline LPSolution lp_minimize_exact(const Vec& objective, const Polytope& P) {
  return solve_lp_impl<Rat>(objective, P, +1);
}
inline LPSolution lp_maximize_exact(const Vec& objective, const Polytope& P) {
  return solve_lp_impl<Rat>(objective, P, -1);
}

inline RatVec to_rational(const Vec& v) {
  RatVec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = Rat(v[i]);
  return out;
}

inline Vec to_double(const RatVec& v) {
  Vec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i].get_d();
  return out;
}

}  // namespace carath
