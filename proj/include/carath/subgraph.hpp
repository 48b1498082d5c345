// Normalized densest k-subgraph by enumeration over the quadratic program
//   max x^T (A/2 + I) x  over  { x in simplex, x_i <= 1/k },
// with the exact 0-or-1/k rounding (mass transfer between fractional
// vertices ordered by neighborhood weight), plus the bipartite variant and
// brute-force referees.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "carath/core.hpp"
#include "carath/enumerate.hpp"
#include "carath/nash.hpp"
#include "carath/rational.hpp"

namespace carath {

struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // normalized u < v
  Matrix adjacency;
  int max_degree = 0;

  Graph() = default;
  Graph(int n_, std::vector<std::pair<int, int>> edge_list) : n(n_), adjacency(std::max(n_, 1), std::max(n_, 1)) {
    require(n >= 1, "Graph: n must be >= 1");
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : edge_list) {
      require(u >= 0 && u < n && v >= 0 && v < n, "Graph: vertex id out of range");
      require(u != v, "Graph: loops are not allowed");
      if (u > v) std::swap(u, v);
      require(seen.insert({u, v}).second, "Graph: duplicate edge");
      edges.emplace_back(u, v);
      adjacency(u, v) = 1.0;
      adjacency(v, u) = 1.0;
    }
    std::sort(edges.begin(), edges.end());
    std::vector<int> deg(static_cast<size_t>(n), 0);
    for (auto [u, v] : edges) {
      ++deg[u];
      ++deg[v];
    }
    for (int d : deg) max_degree = std::max(max_degree, d);
  }

  bool has_edge(int u, int v) const { return adjacency(u, v) != 0.0; }
};

struct NDkSInstance {
  Graph graph;
  int k = 2;
  Matrix Cq;  // A/2 + I

  NDkSInstance() = default;
  NDkSInstance(Graph g, int k_) : graph(std::move(g)), k(k_) {
    require(k >= 2 && k <= graph.n, "NDkS: k must satisfy 2 <= k <= n");
    Cq = Matrix(graph.n, graph.n);
    for (int i = 0; i < graph.n; ++i)
      for (int j = 0; j < graph.n; ++j) Cq(i, j) = 0.5 * graph.adjacency(i, j) + (i == j ? 1.0 : 0.0);
  }
};

struct SubgraphSolution {
  std::vector<int> vertices;  // exactly k ids, sorted
  double density = 0.0;       // |E_S| / k^2
};

struct BipartiteSolution {
  std::vector<int> S, T;  // k ids each, sorted; overlap allowed
  double density = 0.0;   // |E(S,T)| / k^2
};

inline int edges_within(const Graph& g, const std::vector<int>& verts) {
  int cnt = 0;
  for (size_t a = 0; a < verts.size(); ++a)
    for (size_t b = a + 1; b < verts.size(); ++b)
      if (g.has_edge(verts[a], verts[b])) ++cnt;
  return cnt;
}

// edges with one endpoint in S and the other in T, counted once each
inline int edges_between(const Graph& g, const std::vector<int>& S, const std::vector<int>& T) {
  std::vector<char> inS(static_cast<size_t>(g.n), 0), inT(static_cast<size_t>(g.n), 0);
  for (int v : S) inS[v] = 1;
  for (int v : T) inT[v] = 1;
  int cnt = 0;
  for (auto [u, v] : g.edges)
    if ((inS[u] && inT[v]) || (inS[v] && inT[u])) ++cnt;
  return cnt;
}

inline void validate_qp_point(const NDkSInstance& inst, const Vec& x) {
  require(static_cast<int>(x.size()) == inst.graph.n, "qp point: dimension mismatch");
  require(in_simplex(x), "qp point: not in the simplex");
  for (double v : x) require(v <= 1.0 / inst.k + kFeasTol, "qp point: exceeds the 1/k cap");
}

inline double qp_value(const NDkSInstance& inst, const Vec& x) {
  validate_qp_point(inst, x);
  return dot(x, mat_vec(inst.Cq, x));
}

struct RoundingResult {
  Vec z;                           // components exactly 0 or 1/k
  int iterations = 0;              // <= n mass transfers
  bool value_nondecreasing = true; // z^T C z >= y^T C y, compared in rationals
};

namespace detail {

inline Rat rational_qp_value(const NDkSInstance& inst, const RatVec& y) {
  const Graph& g = inst.graph;
  Rat v(0);
  for (int i = 0; i < g.n; ++i) v += y[i] * y[i];
  for (auto [a, b] : g.edges) v += y[a] * y[b];
  return v;
}

}  // namespace detail

// Lemma-style rounding: repeatedly transfer delta = min{y_j, 1/k - y_i}
// between two fractional vertices, picked by the neighborhood weights
// gamma_i = y_i + sum of y over neighbors. Exact rational arithmetic keeps
// the 0-or-1/k postcondition exact.
inline RoundingResult round_to_uniform(const NDkSInstance& inst, const Vec& y) {
  validate_qp_point(inst, y);
  const Graph& g = inst.graph;
  const int n = g.n;
  const Rat one_k = Rat(1) / inst.k;

  RatVec yq = to_rational(y);
  // exact repair: clamp into [0, 1/k], then fix the sum to exactly 1
  for (Rat& v : yq) v = std::min(std::max(v, Rat(0)), Rat(one_k));
  Rat deficit = Rat(1) - std::accumulate(yq.begin(), yq.end(), Rat(0));
  for (int i = 0; i < n && deficit != 0; ++i) {
    if (deficit > 0) {
      Rat room = one_k - yq[i];
      Rat take = std::min(room, Rat(deficit));
      yq[i] += take;
      deficit -= take;
    } else {
      Rat neg = -deficit;
      Rat take = std::min(yq[i], neg);
      yq[i] -= take;
      deficit += take;
    }
  }
  require(deficit == 0, "round_to_uniform: cannot repair the input onto the polytope");

  Rat before = detail::rational_qp_value(inst, yq);

  RoundingResult out;
  for (int iter = 0; iter <= n; ++iter) {
    std::vector<int> M;
    for (int i = 0; i < n; ++i)
      if (yq[i] > 0 && yq[i] < one_k) M.push_back(i);
    if (M.empty()) {
      out.iterations = iter;
      break;
    }
    require(M.size() >= 2, "round_to_uniform: single fractional vertex (internal)");

    std::vector<Rat> gam(static_cast<size_t>(n), Rat(0));
    for (int i : M) {
      gam[i] = yq[i];
      for (int j = 0; j < n; ++j)
        if (g.has_edge(i, j)) gam[i] += yq[j];
    }

    int pick_i = -1, pick_j = -1;
    // case 1: a non-adjacent pair exists; order by gamma + y
    for (int i : M) {
      bool has_nonneighbor = false;
      for (int j : M)
        if (j != i && !g.has_edge(i, j)) {
          has_nonneighbor = true;
          break;
        }
      if (!has_nonneighbor) continue;
      if (pick_i < 0 || gam[i] + yq[i] > gam[pick_i] + yq[pick_i]) pick_i = i;
    }
    if (pick_i >= 0) {
      for (int j : M) {
        if (j == pick_i || g.has_edge(pick_i, j)) continue;
        if (pick_j < 0 || gam[j] + yq[j] < gam[pick_j] + yq[pick_j]) pick_j = j;
      }
    } else {
      // case 2: the fractional set is a clique; order by gamma
      for (int i : M)
        if (pick_i < 0 || gam[i] > gam[pick_i]) pick_i = i;
      for (int j : M) {
        if (j == pick_i) continue;
        if (pick_j < 0 || gam[j] < gam[pick_j]) pick_j = j;
      }
    }

    Rat head = one_k - yq[pick_i];
    Rat delta = std::min(yq[pick_j], head);
    yq[pick_i] += delta;
    yq[pick_j] -= delta;
  }

  Rat after = detail::rational_qp_value(inst, yq);
  out.value_nondecreasing = after >= before;
  out.z.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (yq[i] == one_k)
      out.z[i] = 1.0 / inst.k;
    else {
      require(yq[i] == 0, "round_to_uniform: non 0-or-1/k output (internal)");
      out.z[i] = 0.0;
    }
  }
  return out;
}

namespace detail {

// argmax of x . u over { x in simplex, x_i <= 1/k }: 1/k on the k largest
// coordinates of u, lexicographic ties
inline std::vector<int> top_k_indices(const Vec& u, int k) {
  std::vector<int> idx(u.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return u[a] > u[b]; });
  idx.resize(static_cast<size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace detail

inline SubgraphSolution ndks_bruteforce(const NDkSInstance& inst) {
  const Graph& g = inst.graph;
  const int n = g.n, k = inst.k;
  require(binomial(n, k) <= 1000000, "ndks_bruteforce: instance too large");

  std::vector<int> pick(static_cast<size_t>(k));
  std::iota(pick.begin(), pick.end(), 0);
  SubgraphSolution best;
  best.density = -1.0;
  while (true) {
    int e = edges_within(g, pick);
    double dens = static_cast<double>(e) / (static_cast<double>(k) * k);
    if (dens > best.density) {
      best.density = dens;
      best.vertices = pick;
    }
    int i = k - 1;
    while (i >= 0 && pick[i] == n - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

// Enumerates uniform averages u of columns of A/2 + I up to the size cap,
// maximizes the linearization x . u over the capped simplex, rounds, and
// keeps the densest support.
inline SubgraphSolution solve_ndks(const NDkSInstance& inst, const SolveConfig& cfg) {
  cfg.validate();
  const Graph& g = inst.graph;
  const int n = g.n, k = inst.k;
  double p = std::max(std::log2(static_cast<double>(g.max_degree + 1)), 2.0);
  std::uint64_t cap = detail::multiset_cap(cfg.kappa, p, cfg.eps, cfg.max_multiset);

  std::vector<Vec> cols;
  for (int j = 0; j < n; ++j) cols.push_back(inst.Cq.col(j));
  PointSet colset(cols);

  SubgraphSolution best;
  best.density = -1.0;
  UniformEnumerator en(n, cap);
  while (auto comb = en.next()) {
    Vec u = combination_vector(*comb, colset);
    std::vector<int> support = detail::top_k_indices(u, k);
    Vec x(static_cast<size_t>(n), 0.0);
    for (int i : support) x[i] = 1.0 / k;
    RoundingResult r = round_to_uniform(inst, x);
    std::vector<int> verts;
    for (int i = 0; i < n; ++i)
      if (r.z[i] > 0.0) verts.push_back(i);
    for (int i = 0; i < n && static_cast<int>(verts.size()) < k; ++i)
      if (std::find(verts.begin(), verts.end(), i) == verts.end()) verts.push_back(i);
    std::sort(verts.begin(), verts.end());
    double dens = static_cast<double>(edges_within(g, verts)) / (static_cast<double>(k) * k);
    if (dens > best.density) {
      best.density = dens;
      best.vertices = verts;
    }
  }
  return best;
}

inline BipartiteSolution dkbs_bruteforce(const Graph& g, int k) {
  require(k >= 1 && k <= g.n, "dkbs: k must be in [1, n]");
  const int n = g.n;
  require(binomial(n, k) <= 1000, "dkbs_bruteforce: instance too large");  // C(n,k)^2 <= 1e6
  std::vector<std::vector<int>> subsets;
  {
    std::vector<int> pick(static_cast<size_t>(k));
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      subsets.push_back(pick);
      int i = k - 1;
      while (i >= 0 && pick[i] == n - k + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  BipartiteSolution best;
  best.density = -1.0;
  for (const auto& S : subsets)
    for (const auto& T : subsets) {
      double dens = static_cast<double>(edges_between(g, S, T)) / (static_cast<double>(k) * k);
      if (dens > best.density) {
        best.density = dens;
        best.S = S;
        best.T = T;
      }
    }
  return best;
}

// Bipartite variant: u runs over uniform averages of adjacency columns;
// x is optimized against u by the capped-simplex LP, then y against
// A^T x, one pass each; both are basic 0-or-1/k vectors by construction.
inline BipartiteSolution solve_dkbs(const Graph& g, int k, const SolveConfig& cfg) {
  cfg.validate();
  require(k >= 1 && k <= g.n, "dkbs: k must be in [1, n]");
  const int n = g.n;
  double p = std::max(std::log2(static_cast<double>(std::max(g.max_degree, 4))), 2.0);
  std::uint64_t cap = detail::multiset_cap(cfg.kappa, p, cfg.eps, cfg.max_multiset);

  std::vector<Vec> cols;
  for (int j = 0; j < n; ++j) cols.push_back(g.adjacency.col(j));
  PointSet colset(cols);

  BipartiteSolution best;
  best.density = -1.0;
  UniformEnumerator en(n, cap);
  while (auto comb = en.next()) {
    Vec u = combination_vector(*comb, colset);
    std::vector<int> S = detail::top_k_indices(u, k);
    Vec x(static_cast<size_t>(n), 0.0);
    for (int i : S) x[i] = 1.0 / k;
    Vec xa = vec_mat(x, g.adjacency);
    std::vector<int> T = detail::top_k_indices(xa, k);
    double dens = static_cast<double>(edges_between(g, S, T)) / (static_cast<double>(k) * k);
    if (dens > best.density) {
      best.density = dens;
      best.S = S;
      best.T = T;
    }
  }
  return best;
}

}  // namespace carath
