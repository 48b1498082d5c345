#include <catch2/catch_amalgamated.hpp>

#include "carath/nash.hpp"
#include "helpers.hpp"

using namespace carath;

namespace {

BimatrixGame matching_pennies() {
  Matrix A(2, 2), B(2, 2);
  A(0, 0) = 1;
  A(0, 1) = -1;
  A(1, 0) = -1;
  A(1, 1) = 1;
  for (size_t i = 0; i < B.data.size(); ++i) B.data[i] = -A.data[i];
  return BimatrixGame(A, B);
}

BimatrixGame coordination(int n) {
  return BimatrixGame(Matrix::identity(n), Matrix::identity(n));
}

BimatrixGame random_game(Rng& rng, int n) {
  return BimatrixGame(test_helpers::random_matrix(rng, n, n),
                      test_helpers::random_matrix(rng, n, n));
}

// cyclic zero-sum game with the uniform profile as its equilibrium
BimatrixGame cyclic_zero_sum(int n) {
  Matrix A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int d = (j - i + n) % n;
      if (d == 0) continue;
      A(i, j) = (d <= (n - 1) / 2) ? 1.0 : -1.0;
      if (n % 2 == 0 && d == n / 2) A(i, j) = 0.0;
    }
  Matrix B(n, n);
  for (size_t i = 0; i < B.data.size(); ++i) B.data[i] = -A.data[i];
  return BimatrixGame(A, B);
}

}  // namespace

TEST_CASE("game validation rejects out-of-range payoffs") {
  Matrix A(2, 2);
  A(0, 0) = 1.5;
  CHECK_THROWS_AS(BimatrixGame(A, Matrix(2, 2)), std::invalid_argument);
}

TEST_CASE("sparsity floor and log2 exponent") {
  {
    SparsityInfo sp = sparsity(matching_pennies());  // C = 0
    CHECK(sp.s == 4);
    CHECK(sp.p == Catch::Approx(2.0));
  }
  {
    // 8x8 game whose densest C-column has 5 nonzeros
    Matrix A(8, 8), B(8, 8);
    for (int i = 0; i < 5; ++i) A(i, 0) = 0.5;
    for (int i = 0; i < 3; ++i) A(i, 3) = 0.25;
    BimatrixGame g(A, B);
    SparsityInfo sp = sparsity(g);
    CHECK(sp.s == 5);
    CHECK(sp.p == Catch::Approx(std::log2(5.0)));
  }
  {
    Matrix A(4, 4), B(4, 4);
    for (auto& v : A.data) v = 0.5;
    for (auto& v : B.data) v = 0.5;
    SparsityInfo sp = sparsity(BimatrixGame(A, B));  // all 16 entries nonzero, n = 4
    CHECK(sp.s == 4);
    CHECK(sp.p == Catch::Approx(2.0));
  }
}

TEST_CASE("verify_eps_nash hand values") {
  {
    BimatrixGame g = matching_pennies();
    EquilibriumCertificate c = verify_eps_nash(g, {{0.5, 0.5}, {0.5, 0.5}});
    CHECK(c.row_regret == Catch::Approx(0.0).margin(1e-12));
    CHECK(c.col_regret == Catch::Approx(0.0).margin(1e-12));
  }
  {
    Matrix A(2, 2);
    A(0, 0) = 1.0;
    BimatrixGame g(A, A);
    EquilibriumCertificate c = verify_eps_nash(g, {{1.0, 0.0}, {1.0, 0.0}});
    CHECK(c.row_regret == Catch::Approx(0.0).margin(1e-12));
    CHECK(c.col_regret == Catch::Approx(0.0).margin(1e-12));
    EquilibriumCertificate m = verify_eps_nash(g, {{0.5, 0.5}, {0.5, 0.5}});
    CHECK(m.row_regret == Catch::Approx(0.25));
    CHECK(m.col_regret == Catch::Approx(0.25));
  }
}

TEST_CASE("bp_objective is zero at exact equilibria and flags infeasibility") {
  BimatrixGame g = matching_pennies();
  MixedProfile prof{{0.5, 0.5}, {0.5, 0.5}};
  CHECK(bp_objective(g, prof, 0.0, 0.0) == Catch::Approx(0.0).margin(1e-12));
  CHECK_THROWS_WITH(bp_objective(g, prof, -0.5, 0.0),
                    Catch::Matchers::ContainsSubstring("A y <= pi1"));

  Matrix Z(2, 2);
  BimatrixGame zero(Z, Z);
  CHECK(bp_objective(zero, prof, 0.0, 0.0) == Catch::Approx(0.0));
}

TEST_CASE("Lemma-1 contract: feasible BP value -eps implies eps-Nash") {
  Rng rng(501);
  for (int t = 0; t < 20; ++t) {
    BimatrixGame g = random_game(rng, 3);
    auto eqs = exact_nash_oracle(g);
    REQUIRE(!eqs.empty());
    MixedProfile prof = eqs.front();
    // exact payoffs at the equilibrium
    double pi1 = dot(prof.x, mat_vec(g.A, prof.y));
    double pi2 = dot(vec_mat(prof.x, g.B), prof.y);
    double v = bp_objective(g, prof, pi1, pi2);
    CHECK(std::fabs(v) <= 1e-9);
    // perturb pi upward a little: objective drops, profile stays a 0-Nash
    double v2 = bp_objective(g, prof, std::min(1.0, pi1 + 0.02), std::min(1.0, pi2 + 0.03));
    EquilibriumCertificate cert = verify_eps_nash(g, prof);
    CHECK(cert.max_regret() <= -v2 + 1e-9);
  }
}

TEST_CASE("exact oracle: matching pennies has only the uniform equilibrium") {
  auto eqs = exact_nash_oracle(matching_pennies());
  REQUIRE(eqs.size() == 1);
  for (double v : eqs[0].x) CHECK(v == Catch::Approx(0.5));
  for (double v : eqs[0].y) CHECK(v == Catch::Approx(0.5));
}

TEST_CASE("exact oracle: 2x2 coordination game has three equilibria") {
  auto eqs = exact_nash_oracle(coordination(2));
  REQUIRE(eqs.size() == 3);
  int pure = 0, mixed = 0;
  for (const auto& e : eqs) {
    double mx = *std::max_element(e.x.begin(), e.x.end());
    if (mx == 1.0)
      ++pure;
    else if (std::fabs(mx - 0.5) <= 1e-12)
      ++mixed;
  }
  CHECK(pure == 2);
  CHECK(mixed == 1);
}

TEST_CASE("exact oracle: dominant strategies give the unique pure equilibrium") {
  Matrix A(2, 2), B(2, 2);
  A(0, 0) = 1.0;
  A(0, 1) = 1.0;  // row 0 dominates
  B(0, 0) = 1.0;
  B(1, 0) = 1.0;  // column 0 dominates
  auto eqs = exact_nash_oracle(BimatrixGame(A, B));
  REQUIRE(eqs.size() == 1);
  CHECK(eqs[0].x[0] == 1.0);
  CHECK(eqs[0].y[0] == 1.0);
}

TEST_CASE("oracle profiles are exact equilibria on random games") {
  Rng rng(502);
  for (int t = 0; t < 15; ++t) {
    int n = 2 + t % 3;
    BimatrixGame g = random_game(rng, n);
    auto eqs = exact_nash_oracle(g);
    REQUIRE(!eqs.empty());  // every finite game has an equilibrium
    for (const auto& prof : eqs) {
      EquilibriumCertificate c = verify_eps_nash(g, prof);
      CHECK(c.max_regret() <= 1e-9);
    }
  }
}

TEST_CASE("solve_sparse_nash: zero game accepts u = 0 immediately") {
  BimatrixGame g = matching_pennies();
  SolveConfig cfg;
  cfg.eps = 0.1;
  cfg.max_multiset = 2;
  NashSolveReport r = solve_sparse_nash(g, cfg);
  REQUIRE(r.status == NashStatus::FOUND);
  CHECK(r.certificate->max_regret() <= 0.1 + 1e-9);
  CHECK(r.certificate->u_used.has_value());
  CHECK(*r.certificate->residual <= 0.05);
}

TEST_CASE("solve_sparse_nash: coordination game at eps = 0.2") {
  BimatrixGame g = coordination(3);
  SolveConfig cfg;
  cfg.eps = 0.2;
  cfg.max_multiset = 3;
  NashSolveReport r = solve_sparse_nash(g, cfg);
  REQUIRE(r.status == NashStatus::FOUND);
  CHECK(r.certificate->max_regret() <= 0.2 + 1e-9);
}

TEST_CASE("solve_sparse_nash in P_NORM mode matches the acceptance gate") {
  BimatrixGame g = coordination(2);
  SolveConfig cfg;
  cfg.eps = 0.3;
  cfg.max_multiset = 3;
  cfg.norm_mode = NormMode::P_NORM;
  NashSolveReport r = solve_sparse_nash(g, cfg);
  REQUIRE(r.status == NashStatus::FOUND);
  CHECK(r.certificate->max_regret() <= 0.3 + 1e-9);
}

TEST_CASE("solve_sparse_nash reports EXHAUSTED under a tiny cap") {
  // rock-paper-scissors against B = -A/2: the unique equilibrium is
  // uniform with a dense C y-hat, so no single-column u can be accepted
  Matrix A(3, 3), B(3, 3);
  int rps[3][3] = {{0, 1, -1}, {-1, 0, 1}, {1, -1, 0}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      A(i, j) = rps[i][j];
      B(i, j) = -0.5 * rps[i][j];
    }
  BimatrixGame dense(A, B);
  SolveConfig cfg;
  cfg.eps = 0.1;
  cfg.max_multiset = 1;
  NashSolveReport r = solve_sparse_nash(dense, cfg);
  CHECK(r.status == NashStatus::EXHAUSTED);
  CHECK(r.largest_size_tried == 1);
  CHECK(r.candidates_tried == 3);
  CHECK(!r.certificate.has_value());
}

TEST_CASE("planted witness rescues a capped search") {
  Rng rng(503);
  BimatrixGame g = random_game(rng, 3);
  auto eqs = exact_nash_oracle(g);
  REQUIRE(!eqs.empty());
  const MixedProfile& hat = eqs.front();
  double eps = 0.1;

  SparsifyRequest req;
  req.X = g.columns_of_C();
  req.mu = mat_vec(g.C, hat.y);
  req.weights = hat.y;
  req.eps = 0.9 * eps / 4.0;
  req.norm = NormSpec::finite(sparsity(g).p);
  req.max_retries = 64;
  SparsifyResult plant = sparsify(req, 11);
  REQUIRE(plant.accepted);  // distance <= 0.45 eps < eps/2 - solve_tol

  SolveConfig cfg;
  cfg.eps = eps;
  cfg.max_multiset = 1;  // enumeration alone would likely exhaust
  cfg.planted = {plant.combination};
  NashSolveReport r = solve_sparse_nash(g, cfg);
  REQUIRE(r.status == NashStatus::FOUND);
  CHECK(r.certificate->max_regret() <= eps + 1e-9);
  // Holder chain at acceptance
  Vec u = combination_vector(*r.certificate->u_used, g.columns_of_C());
  double lhs = std::fabs(dot(r.certificate->profile.x,
                             sub(mat_vec(g.C, r.certificate->profile.y), u)));
  CHECK(lhs <= *r.certificate->residual + 1e-9);
  CHECK(*r.certificate->residual <= eps / 2.0);
}

TEST_CASE("randomized mode obeys the same gate and is seed-deterministic") {
  BimatrixGame g = coordination(2);
  SolveConfig cfg;
  cfg.eps = 0.25;
  cfg.max_multiset = 4;
  cfg.randomized_mode = true;
  cfg.random_budget = 64;
  cfg.seed = 99;
  NashSolveReport a = solve_sparse_nash(g, cfg);
  NashSolveReport b = solve_sparse_nash(g, cfg);
  REQUIRE(a.status == b.status);
  if (a.status == NashStatus::FOUND) {
    CHECK(a.certificate->profile.x == b.certificate->profile.x);
    CHECK(a.certificate->max_regret() <= 0.25 + 1e-9);
  }
}

TEST_CASE("small-probability exponent formula") {
  CHECK(small_prob_exponent(10, 10) == Catch::Approx(2.0));  // s = n = m
  CHECK(small_prob_exponent(16, 4) == Catch::Approx(4.0));
  CHECK(small_prob_exponent(4, 4) == Catch::Approx(2.0));
  CHECK(small_prob_exponent(64, 2) == Catch::Approx(10.0));
}

TEST_CASE("solve_small_prob on uniform-equilibrium games") {
  for (int n : {2, 3, 4}) {
    BimatrixGame g = cyclic_zero_sum(n);
    // uniform profile is an equilibrium with all entries 1/n
    EquilibriumCertificate u =
        verify_eps_nash(g, {Vec(static_cast<size_t>(n), 1.0 / n), Vec(static_cast<size_t>(n), 1.0 / n)});
    REQUIRE(u.max_regret() <= 1e-12);

    SolveConfig cfg;
    cfg.eps = 0.25;
    cfg.max_multiset = 2;
    NashSolveReport r = solve_small_prob(g, n, cfg);
    REQUIRE(r.status == NashStatus::FOUND);
    CHECK(r.certificate->max_regret() <= 0.25 + 1e-9);
    // q-norm cap held at the returned point
    double p = small_prob_exponent(sparsity(g).s, n);
    CHECK(q_norm(r.certificate->profile.x, p / (p - 1.0)) <=
          std::pow(static_cast<double>(n), -1.0 / p) + 1e-5);
  }
}

TEST_CASE("normalize_scaled_game bookkeeping") {
  {
    Matrix A = Matrix::identity(2), B = Matrix::identity(2);
    ScaledGame s = normalize_scaled_game(A, B, 1.0, 1.0, 0.0);
    CHECK(s.eps_scale == Catch::Approx(1.0));
    CHECK(s.game.A.data == A.data);
  }
  {
    Matrix A(2, 2), B(2, 2);
    for (auto& v : A.data) v = 0.5;
    for (auto& v : B.data) v = -0.25;
    ScaledGame s = normalize_scaled_game(A, B, 2.0, 2.0, 0.0);
    CHECK(s.eps_scale == Catch::Approx(2.0));  // entries stay within [-1,1]
    CHECK(s.game.A(0, 0) == Catch::Approx(1.0));
  }
}

TEST_CASE("scaled game preserves equilibria (oracle cross-check)") {
  Rng rng(504);
  for (int t = 0; t < 8; ++t) {
    Matrix A = test_helpers::random_matrix(rng, 2, 2, -0.4, 0.4);
    Matrix B = test_helpers::random_matrix(rng, 2, 2, -0.4, 0.4);
    BimatrixGame base(A, B);
    // gamma shift only: equilibria unchanged
    ScaledGame shifted = normalize_scaled_game(A, B, 1.0, 1.0, 0.3);
    auto eq_base = exact_nash_oracle(base);
    for (const auto& prof : eq_base) {
      EquilibriumCertificate c = verify_eps_nash(shifted.game, prof);
      CHECK(c.max_regret() <= 1e-9);
    }
    // positive rescale of both payoffs: equilibria unchanged
    ScaledGame doubled = normalize_scaled_game(A, B, 2.0, 2.0, 0.0);
    for (const auto& prof : eq_base) {
      EquilibriumCertificate c = verify_eps_nash(doubled.game, prof);
      CHECK(c.max_regret() <= 1e-9);
    }
  }
}

TEST_CASE("solve_both_sparse hand cases") {
  {
    Matrix Z(2, 2);
    BimatrixGame zero(Z, Z);
    SolveConfig cfg;
    cfg.eps = 0.2;
    cfg.max_multiset = 1;
    NashSolveReport r = solve_both_sparse(zero, cfg);
    REQUIRE(r.status == NashStatus::FOUND);
    CHECK(r.certificate->max_regret() <= 1e-9);
  }
  {
    BimatrixGame g = matching_pennies();
    SolveConfig cfg;
    cfg.eps = 0.2;
    cfg.max_multiset = 2;
    NashSolveReport r = solve_both_sparse(g, cfg);
    REQUIRE(r.status == NashStatus::FOUND);
    CHECK(r.certificate->max_regret() <= 0.2 + 1e-9);
  }
  {
    BimatrixGame g = coordination(2);
    SolveConfig cfg;
    cfg.eps = 0.2;
    cfg.max_multiset = 2;
    NashSolveReport r = solve_both_sparse(g, cfg);
    REQUIRE(r.status == NashStatus::FOUND);
    CHECK(r.certificate->max_regret() <= 0.2 + 1e-9);
  }
}

TEST_CASE("welfare search finds the high-welfare equilibrium") {
  BimatrixGame g = coordination(2);  // pure equilibria have welfare 2
  SolveConfig cfg;
  cfg.eps = 0.2;
  cfg.max_multiset = 2;
  auto best = solve_max_welfare(g, cfg);
  REQUIRE(best.has_value());
  CHECK(best->pi1 + best->pi2 >= 2.0 - 0.2 - 1e-9);
}

TEST_CASE("certificates are sound across solver paths on random games") {
  Rng rng(505);
  for (int t = 0; t < 12; ++t) {
    int n = 2 + t % 3;
    BimatrixGame g = random_game(rng, n);
    SolveConfig cfg;
    cfg.eps = 0.25;
    cfg.max_multiset = 3;
    NashSolveReport r = solve_sparse_nash(g, cfg);
    if (r.status == NashStatus::FOUND) {
      EquilibriumCertificate redo = verify_eps_nash(g, r.certificate->profile);
      CHECK(redo.max_regret() <= 0.25 + 1e-7);
      CHECK(redo.row_regret == Catch::Approx(r.certificate->row_regret).margin(1e-12));
    }
  }
}

TEST_CASE("p_override steers the P_NORM path and the size cap") {
  BimatrixGame g = coordination(2);
  SolveConfig cfg;
  cfg.eps = 0.3;
  cfg.norm_mode = NormMode::P_NORM;
  cfg.p_override = 3.0;
  cfg.max_multiset = 3;
  NashSolveReport r = solve_sparse_nash(g, cfg);
  REQUIRE(r.status == NashStatus::FOUND);
  CHECK(r.certificate->max_regret() <= 0.3 + 1e-9);
  cfg.p_override = 1.0;  // below the allowed range
  CHECK_THROWS_AS(solve_sparse_nash(g, cfg), std::invalid_argument);
}

TEST_CASE("oracle on a degenerate game returns exact equilibria only") {
  // row 0 dominates and every column pays the same: x = e0 against a
  // continuum of y; support enumeration returns one vertex per pattern
  Matrix A(2, 2), B(2, 2);
  A(0, 0) = 1.0;
  A(0, 1) = 1.0;
  B(0, 0) = 1.0;
  B(0, 1) = 1.0;
  BimatrixGame g(A, B);
  auto eqs = exact_nash_oracle(g);
  // support enumeration returns vertex representatives: (e0, e0), (e0, e1)
  CHECK(eqs.size() == 2);
  for (const auto& prof : eqs) {
    CHECK(prof.x[0] == 1.0);
    CHECK(verify_eps_nash(g, prof).max_regret() <= 1e-12);
  }
}
