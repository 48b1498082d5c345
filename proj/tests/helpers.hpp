#pragma once

#include <vector>

#include "carath/core.hpp"
#include "carath/rng.hpp"

namespace test_helpers {

using carath::Rng;
using carath::Vec;

inline Vec random_vec(Rng& rng, int d, double lo = -1.0, double hi = 1.0) {
  Vec v(static_cast<size_t>(d));
  for (double& x : v) x = lo + (hi - lo) * rng.next_double();
  return v;
}

inline Vec random_simplex_point(Rng& rng, int n) {
  Vec v(static_cast<size_t>(n));
  double s = 0.0;
  for (double& x : v) {
    x = -std::log(1.0 - rng.next_double());
    s += x;
  }
  for (double& x : v) x /= s;
  return v;
}

inline carath::Matrix random_matrix(Rng& rng, int r, int c, double lo = -1.0, double hi = 1.0) {
  carath::Matrix m(r, c);
  for (double& x : m.data) x = lo + (hi - lo) * rng.next_double();
  return m;
}

}  // namespace test_helpers
