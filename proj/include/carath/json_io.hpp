// JSON wire formats: vectors and matrices are plain (nested) arrays in
// row-major order; games are {"A": [[...]], "B": [[...]]}; graphs are
// {"n": n, "edges": [[u, v], ...]} with 0-indexed vertices. Parse errors
// name the offending field.
#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "carath/caratheodory.hpp"
#include "carath/core.hpp"
#include "carath/geometry.hpp"
#include "carath/lower_bound.hpp"
#include "carath/nash.hpp"
#include "carath/subgraph.hpp"

namespace carath {

using Json = nlohmann::json;

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace jsond {

inline const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name))
    throw ParseError(std::string("missing field '") + name + "'");
  return j.at(name);
}

inline double number(const Json& j, const char* name) {
  if (!j.is_number()) throw ParseError(std::string("field '") + name + "' must be a number");
  return j.get<double>();
}

}  // namespace jsond

inline Json vec_to_json(const Vec& v) { return Json(v); }

inline Vec vec_from_json(const Json& j, const char* name) {
  if (!j.is_array() || j.empty())
    throw ParseError(std::string("field '") + name + "' must be a nonempty array");
  Vec v;
  v.reserve(j.size());
  for (const auto& x : j) v.push_back(jsond::number(x, name));
  if (!all_finite(v)) throw ParseError(std::string("field '") + name + "' has non-finite entries");
  return v;
}

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows; ++i) rows.push_back(vec_to_json(m.row(i)));
  return rows;
}

inline Matrix matrix_from_json(const Json& j, const char* name) {
  if (!j.is_array() || j.empty())
    throw ParseError(std::string("field '") + name + "' must be a nonempty array of rows");
  std::vector<Vec> rows;
  for (const auto& r : j) rows.push_back(vec_from_json(r, name));
  Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size())
      throw ParseError(std::string("field '") + name + "' has ragged rows");
    for (size_t c = 0; c < rows[i].size(); ++c) m(static_cast<int>(i), static_cast<int>(c)) = rows[i][c];
  }
  return m;
}

inline Json norm_to_json(const NormSpec& n) {
  if (n.is_inf) return Json("inf");
  return Json(n.p);
}

inline NormSpec norm_from_json(const Json& j, const char* name) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return NormSpec::inf();
    throw ParseError(std::string("field '") + name + "' must be a number >= 2 or \"inf\"");
  }
  double p = jsond::number(j, name);
  if (!(p >= 2.0)) throw ParseError(std::string("field '") + name + "' must be >= 2");
  return NormSpec::finite(p);
}

inline BimatrixGame game_from_json(const Json& j) {
  Matrix A = matrix_from_json(jsond::field(j, "A"), "A");
  Matrix B = matrix_from_json(jsond::field(j, "B"), "B");
  try {
    return BimatrixGame(std::move(A), std::move(B));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("game: ") + e.what());
  }
}

inline Json game_to_json(const BimatrixGame& g) {
  return Json{{"A", matrix_to_json(g.A)}, {"B", matrix_to_json(g.B)}};
}

inline Graph graph_from_json(const Json& j) {
  int n = static_cast<int>(jsond::number(jsond::field(j, "n"), "n"));
  const Json& ej = jsond::field(j, "edges");
  if (!ej.is_array()) throw ParseError("field 'edges' must be an array of [u, v] pairs");
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : ej) {
    if (!e.is_array() || e.size() != 2) throw ParseError("field 'edges' must contain [u, v] pairs");
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  try {
    return Graph(n, std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("graph: ") + e.what());
  }
}

inline Json graph_to_json(const Graph& g) {
  Json edges = Json::array();
  for (auto [u, v] : g.edges) edges.push_back(Json::array({u, v}));
  return Json{{"n", g.n}, {"edges", edges}};
}

inline Json certificate_to_json(const EquilibriumCertificate& c) {
  Json j{{"x", vec_to_json(c.profile.x)},
         {"y", vec_to_json(c.profile.y)},
         {"row_regret", c.row_regret},
         {"col_regret", c.col_regret},
         {"pi1", c.pi1},
         {"pi2", c.pi2}};
  if (c.u_used) j["u_multiset"] = c.u_used->multiset;
  if (c.residual) j["residual"] = *c.residual;
  return j;
}

inline EquilibriumCertificate certificate_from_json(const Json& j) {
  EquilibriumCertificate c;
  c.profile.x = vec_from_json(jsond::field(j, "x"), "x");
  c.profile.y = vec_from_json(jsond::field(j, "y"), "y");
  c.row_regret = jsond::number(jsond::field(j, "row_regret"), "row_regret");
  c.col_regret = jsond::number(jsond::field(j, "col_regret"), "col_regret");
  c.pi1 = jsond::number(jsond::field(j, "pi1"), "pi1");
  c.pi2 = jsond::number(jsond::field(j, "pi2"), "pi2");
  if (j.contains("u_multiset"))
    c.u_used = UniformCombination(j.at("u_multiset").get<std::vector<int>>());
  if (j.contains("residual")) c.residual = j.at("residual").get<double>();
  return c;
}

inline SparsifyRequest sparsify_request_from_json(const Json& j) {
  SparsifyRequest req;
  const Json& pts = jsond::field(j, "points");
  if (!pts.is_array() || pts.empty()) throw ParseError("field 'points' must be a nonempty array");
  std::vector<Vec> points;
  for (const auto& p : pts) points.push_back(vec_from_json(p, "points"));
  try {
    req.X = PointSet(std::move(points));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("points: ") + e.what());
  }
  req.mu = vec_from_json(jsond::field(j, "mu"), "mu");
  if (j.contains("weights")) req.weights = vec_from_json(j.at("weights"), "weights");
  req.eps = jsond::number(jsond::field(j, "eps"), "eps");
  if (j.contains("p")) req.norm = norm_from_json(j.at("p"), "p");
  if (j.contains("max_retries")) req.max_retries = j.at("max_retries").get<int>();
  return req;
}

inline Json sparsify_request_to_json(const SparsifyRequest& req) {
  Json pts = Json::array();
  for (const Vec& p : req.X.points) pts.push_back(vec_to_json(p));
  Json j{{"points", pts},
         {"mu", vec_to_json(req.mu)},
         {"eps", req.eps},
         {"p", norm_to_json(req.norm)},
         {"max_retries", req.max_retries}};
  if (req.weights) j["weights"] = vec_to_json(*req.weights);
  return j;
}

inline Json sparsify_result_to_json(const SparsifyResult& r) {
  return Json{{"multiset", r.combination.multiset},
              {"achieved_distance", r.achieved_distance},
              {"sample_count_m", r.sample_count_m},
              {"retries_used", r.retries_used},
              {"accepted", r.accepted}};
}

inline SparsifyResult sparsify_result_from_json(const Json& j) {
  SparsifyResult r;
  r.combination = UniformCombination(jsond::field(j, "multiset").get<std::vector<int>>());
  r.achieved_distance = jsond::number(jsond::field(j, "achieved_distance"), "achieved_distance");
  r.sample_count_m = jsond::field(j, "sample_count_m").get<std::uint64_t>();
  r.retries_used = static_cast<int>(jsond::number(jsond::field(j, "retries_used"), "retries_used"));
  r.accepted = jsond::field(j, "accepted").get<bool>();
  return r;
}

inline Json decomposition_to_json(const PermutationDecomposition& pd) {
  Json perms = Json::array();
  for (const auto& p : pd.perms) perms.push_back(p);
  return Json{{"permutations", perms}, {"weights", vec_to_json(pd.weights)}};
}

inline PermutationDecomposition decomposition_from_json(const Json& j) {
  PermutationDecomposition pd;
  for (const auto& p : jsond::field(j, "permutations"))
    pd.perms.push_back(p.get<std::vector<int>>());
  pd.weights = vec_from_json(jsond::field(j, "weights"), "weights");
  return pd;
}

inline Json subgraph_to_json(const SubgraphSolution& s) {
  return Json{{"vertices", s.vertices}, {"density", s.density}};
}

inline Json bipartite_to_json(const BipartiteSolution& s) {
  return Json{{"S", s.S}, {"T", s.T}, {"density", s.density}};
}

inline Json lower_bound_report_to_json(const LowerBoundReport& rep) {
  Json rows = Json::array();
  for (const auto& r : rep.rows)
    rows.push_back(Json{{"k", r.k}, {"distance", r.distance}, {"margin", r.margin}});
  return Json{{"d", rep.lb_case.d},
              {"p", rep.lb_case.p},
              {"eps", rep.lb_case.eps},
              {"k_threshold", rep.lb_case.k_threshold()},
              {"rows", rows},
              {"all_pass", rep.all_pass}};
}

inline Json rainbow_to_json(const RainbowResult& r) {
  return Json{{"choice", r.choice},
              {"weights", vec_to_json(r.witness_weights)},
              {"distance", r.distance}};
}

inline Json tverberg_to_json(const TverbergPartition& t) {
  Json parts = Json::array();
  for (const auto& p : t.parts) parts.push_back(p);
  return Json{{"parts", parts}, {"mu", vec_to_json(t.mu)}, {"max_distance", t.best_f}};
}

}  // namespace carath
