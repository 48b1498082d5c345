#include <catch2/catch_amalgamated.hpp>

#include "carath/lower_bound.hpp"
#include "helpers.hpp"

using namespace carath;

TEST_CASE("best_k_uniform_distance closed-form values") {
  CHECK(best_k_uniform_distance(4, 4, 2.0) == Catch::Approx(0.0).margin(1e-15));
  CHECK(best_k_uniform_distance(4, 2, 2.0) == Catch::Approx(0.5));
  // p = 2 simplifies to sqrt(1/k - 1/d)
  CHECK(best_k_uniform_distance(100, 24, 2.0) ==
        Catch::Approx(std::sqrt(1.0 / 24.0 - 0.01)).epsilon(1e-12));
  CHECK(best_k_uniform_distance(100, 24, 2.0) == Catch::Approx(0.17795).margin(5e-6));
}

TEST_CASE("distance decreases strictly in k") {
  for (double p : {2.0, 3.0, 4.0}) {
    for (int d : {6, 16, 50}) {
      double prev = best_k_uniform_distance(d, 1, p);
      for (int k = 2; k <= d; ++k) {
        double cur = best_k_uniform_distance(d, k, p);
        CHECK(cur < prev);
        prev = cur;
      }
    }
  }
}

TEST_CASE("closed form dominates the one-sided bound") {
  // (k (1/k - 1/d)^p)^{1/p} <= full distance, for all tested (d, k, p)
  for (double p : {2.0, 2.5, 3.0, 4.0})
    for (int d : {8, 20, 64})
      for (int k = 1; k <= d; ++k) {
        double one_sided = std::pow(
            k * std::pow(1.0 / k - 1.0 / d, p), 1.0 / p);
        CHECK(one_sided <= best_k_uniform_distance(d, k, p) + 1e-12);
      }
}

namespace {

// grid search over the k-dimensional weight simplex (test oracle)
double grid_min_distance(int d, int k, double p, int grid) {
  std::vector<int> w(static_cast<size_t>(k), 0);
  double best = carath::kInf;
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == k - 1) {
      w[pos] = left;
      // distance from (w/grid on first k coords, 0 elsewhere) to barycenter
      double s = 0.0;
      for (int i = 0; i < k; ++i)
        s += std::pow(std::fabs(static_cast<double>(w[i]) / grid - 1.0 / d), p);
      s += (d - k) * std::pow(1.0 / d, p);
      best = std::min(best, std::pow(s, 1.0 / p));
      return;
    }
    for (int v = 0; v <= left; ++v) {
      w[pos] = v;
      rec(pos + 1, left - v);
    }
  };
  rec(0, grid);
  return best;
}

}  // namespace

TEST_CASE("closed form cross-validated against simplex grid search") {
  for (int d : {4, 5, 6}) {
    for (int k = 1; k <= 3; ++k) {
      for (double p : {2.0, 3.0}) {
        double grid = grid_min_distance(d, k, p, 100);
        double exact = best_k_uniform_distance(d, k, p);
        CHECK(grid >= exact - 1e-3);
        CHECK(grid <= exact + 0.05);  // grid resolution slack
      }
    }
  }
}

TEST_CASE("verify_lower_bound sweeps") {
  {
    LowerBoundCase c(100, 2.0, 0.1);
    CHECK(c.k_threshold() == Catch::Approx(25.0));
    LowerBoundReport rep = verify_lower_bound(c);
    CHECK(rep.all_pass);
    CHECK(rep.rows.size() == 24);  // k = 1..24
    CHECK(rep.rows.back().distance == Catch::Approx(0.17795).margin(5e-6));
    for (const auto& row : rep.rows) CHECK(row.margin > 0.0);
  }
  {
    LowerBoundCase c(16, 2.0, 0.25);
    LowerBoundReport rep = verify_lower_bound(c);
    CHECK(rep.all_pass);
    REQUIRE(rep.rows.size() == 3);  // threshold k < 4
    CHECK(rep.rows[0].distance == Catch::Approx(std::sqrt(1.0 - 1.0 / 16.0)));
    CHECK(rep.rows[1].distance == Catch::Approx(std::sqrt(0.5 - 1.0 / 16.0)));
    CHECK(rep.rows[2].distance == Catch::Approx(std::sqrt(1.0 / 3.0 - 1.0 / 16.0)));
  }
}

TEST_CASE("lower-bound case validation") {
  CHECK_THROWS_AS(LowerBoundCase(5, 2.0, 0.1), std::invalid_argument);  // 1/eps^2 = 100 > 5
  CHECK_THROWS_AS(LowerBoundCase(100, 1.5, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(LowerBoundCase(100, 2.0, 1.5), std::invalid_argument);
}
