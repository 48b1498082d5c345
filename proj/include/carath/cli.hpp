// Command-line surface: one subcommand per solver, JSON in, JSON out.
// Payload goes to stdout (or --output), a version line goes to stderr.
// Exit codes: 0 success, 2 search exhausted / nothing found, 1 input error.
#pragma once

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "carath/json_io.hpp"

namespace carath::cli {

constexpr const char* kVersion = "carath 1.0.0";

namespace detail {

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open input file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    std::string msg = e.what();
    for (char& c : msg)
      if (c == '\n') c = ' ';
    throw ParseError("malformed JSON in '" + path + "': " + msg);
  }
}

inline Json parse_inline(const std::string& text, const char* name) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error&) {
    throw ParseError(std::string("option '") + name + "' is not valid JSON");
  }
}

inline int emit(const Json& payload, const std::optional<std::string>& output_path,
                std::ostream& out, int code) {
  if (output_path) {
    std::ofstream f(*output_path);
    if (!f) throw ParseError("cannot open output file '" + *output_path + "'");
    f << payload.dump(2) << "\n";
  } else {
    out << payload.dump(2) << "\n";
  }
  return code;
}

struct SolveFlags {
  double eps = 0.1;
  double kappa = 256.0;
  std::uint64_t seed = 0;
  std::int64_t max_multiset = -1;
  std::string norm_mode = "inf_lp";
  double welfare_floor = std::numeric_limits<double>::quiet_NaN();
  bool randomized = false;
  std::uint64_t random_budget = 256;
  double p_override = std::numeric_limits<double>::quiet_NaN();
  std::optional<std::string> output;

  void attach(CLI::App* cmd, bool with_norm = true) {
    cmd->add_option("--eps", eps, "additive approximation target");
    cmd->add_option("--kappa", kappa, "multiset-size constant");
    cmd->add_option("--seed", seed, "seed for randomized paths");
    cmd->add_option("--max-multiset", max_multiset, "cap on enumerated multiset size");
    if (with_norm) {
      cmd->add_option("--norm-mode", norm_mode, "inf_lp or p_norm")
          ->check(CLI::IsMember({"inf_lp", "p_norm"}));
      cmd->add_option("--p-override", p_override, "norm exponent replacing log2(s)");
    }
    cmd->add_option("--welfare-floor", welfare_floor, "require pi1 + pi2 >= this floor");
    cmd->add_flag("--randomized", randomized, "sample multisets instead of enumerating");
    cmd->add_option("--random-budget", random_budget, "multisets sampled in randomized mode");
    cmd->add_option("--output,-o", output, "write the JSON payload to this path");
  }

  SolveConfig to_config() const {
    SolveConfig cfg;
    cfg.eps = eps;
    cfg.kappa = kappa;
    cfg.seed = seed;
    if (max_multiset >= 0) cfg.max_multiset = static_cast<std::uint64_t>(max_multiset);
    cfg.norm_mode = norm_mode == "p_norm" ? NormMode::P_NORM : NormMode::INF_LP;
    if (!std::isnan(welfare_floor)) cfg.welfare_floor = welfare_floor;
    cfg.randomized_mode = randomized;
    cfg.random_budget = random_budget;
    if (!std::isnan(p_override)) cfg.p_override = p_override;
    return cfg;
  }
};

inline int emit_nash_report(const NashSolveReport& rep, const std::optional<std::string>& output,
                            std::ostream& out) {
  if (rep.status == NashStatus::FOUND) {
    Json j = certificate_to_json(*rep.certificate);
    j["status"] = "FOUND";
    j["candidates_tried"] = rep.candidates_tried;
    return emit(j, output, out, 0);
  }
  Json j{{"status", "EXHAUSTED"},
         {"largest_size_tried", rep.largest_size_tried},
         {"candidates_tried", rep.candidates_tried}};
  return emit(j, output, out, 2);
}

}  // namespace detail

inline int dispatch(int argc, const char* const* argv, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  CLI::App app{"approximate-Caratheodory solvers"};
  app.require_subcommand(1);

  // ---- sparsify ----
  auto* sp = app.add_subcommand("sparsify", "sample a k-uniform approximation of mu");
  std::string sp_input;
  std::uint64_t sp_seed = 0;
  std::optional<std::string> sp_output;
  sp->add_option("--input", sp_input, "JSON with points, mu, weights, eps, p")->required();
  sp->add_option("--seed", sp_seed, "sampling seed");
  sp->add_option("--output,-o", sp_output, "write the JSON payload to this path");

  // ---- nash ----
  auto* nash = app.add_subcommand("nash", "bimatrix-game solvers");
  nash->require_subcommand(1);
  std::string nash_game;
  detail::SolveFlags nash_flags;
  auto* nsolve = nash->add_subcommand("solve", "enumeration search for an eps-Nash profile");
  nsolve->add_option("--game", nash_game, "game JSON file")->required();
  nash_flags.attach(nsolve);

  std::string nv_game, nv_x, nv_y;
  std::optional<std::string> nv_output;
  auto* nverify = nash->add_subcommand("verify", "regrets of a given profile");
  nverify->add_option("--game", nv_game)->required();
  nverify->add_option("--x", nv_x, "row strategy as a JSON array")->required();
  nverify->add_option("--y", nv_y, "column strategy as a JSON array")->required();
  nverify->add_option("--output,-o", nv_output);

  std::string no_game;
  std::optional<std::string> no_output;
  auto* noracle = nash->add_subcommand("oracle", "all equilibria by support enumeration (n <= 5)");
  noracle->add_option("--game", no_game)->required();
  noracle->add_option("--output,-o", no_output);

  std::string nsp_game;
  int nsp_m = 1;
  detail::SolveFlags nsp_flags;
  auto* nsmall = nash->add_subcommand("small-prob", "variant for m-small-probability equilibria");
  nsmall->add_option("--game", nsp_game)->required();
  nsmall->add_option("--m", nsp_m, "smallness parameter (entries <= 1/m)")->required();
  nsp_flags.attach(nsmall, /*with_norm=*/false);

  std::string nbs_game;
  detail::SolveFlags nbs_flags;
  auto* nboth = nash->add_subcommand("both-sparse", "variant for games with sparse A and B");
  nboth->add_option("--game", nbs_game)->required();
  nbs_flags.attach(nboth, /*with_norm=*/false);

  // ---- ndks ----
  auto* ndks = app.add_subcommand("ndks", "normalized densest k-subgraph");
  ndks->require_subcommand(1);
  std::string nd_graph;
  int nd_k = 2;
  detail::SolveFlags nd_flags;
  auto* ndsolve = ndks->add_subcommand("solve", "enumeration solver");
  ndsolve->add_option("--graph", nd_graph)->required();
  ndsolve->add_option("--k", nd_k)->required();
  nd_flags.attach(ndsolve, /*with_norm=*/false);
  std::string ndb_graph;
  int ndb_k = 2;
  std::optional<std::string> ndb_output;
  auto* ndbrute = ndks->add_subcommand("brute", "exhaustive referee");
  ndbrute->add_option("--graph", ndb_graph)->required();
  ndbrute->add_option("--k", ndb_k)->required();
  ndbrute->add_option("--output,-o", ndb_output);

  // ---- dkbs ----
  auto* dkbs = app.add_subcommand("dkbs", "densest k x k bipartite subgraph");
  dkbs->require_subcommand(1);
  std::string db_graph;
  int db_k = 1;
  detail::SolveFlags db_flags;
  auto* dbsolve = dkbs->add_subcommand("solve", "enumeration solver");
  dbsolve->add_option("--graph", db_graph)->required();
  dbsolve->add_option("--k", db_k)->required();
  db_flags.attach(dbsolve, /*with_norm=*/false);
  std::string dbb_graph;
  int dbb_k = 1;
  std::optional<std::string> dbb_output;
  auto* dbbrute = dkbs->add_subcommand("brute", "exhaustive referee");
  dbbrute->add_option("--graph", dbb_graph)->required();
  dbbrute->add_option("--k", dbb_k)->required();
  dbbrute->add_option("--output,-o", dbb_output);

  // ---- bvn ----
  auto* bvn = app.add_subcommand("bvn", "Birkhoff-von Neumann decomposition");
  bvn->require_subcommand(1);
  std::string bd_matrix;
  std::optional<std::string> bd_output;
  auto* bdec = bvn->add_subcommand("decompose", "exact decomposition by repeated matchings");
  bdec->add_option("--matrix", bd_matrix, "doubly stochastic matrix JSON")->required();
  bdec->add_option("--output,-o", bd_output);
  std::string ba_matrix;
  double ba_eps = 0.25;
  std::uint64_t ba_seed = 0;
  int ba_retries = 32;
  std::optional<std::string> ba_output;
  auto* bapprox = bvn->add_subcommand("approx", "k-uniform sampled decomposition");
  bapprox->add_option("--matrix", ba_matrix)->required();
  bapprox->add_option("--eps", ba_eps);
  bapprox->add_option("--seed", ba_seed);
  bapprox->add_option("--max-retries", ba_retries);
  bapprox->add_option("--output,-o", ba_output);

  // ---- rainbow ----
  auto* rb = app.add_subcommand("rainbow", "approximate colorful-Caratheodory rainbow");
  std::string rb_input;
  double rb_eps = 0.1;
  std::string rb_p = "2";
  std::optional<std::string> rb_output;
  rb->add_option("--input", rb_input, "JSON with classes and mu")->required();
  rb->add_option("--eps", rb_eps);
  rb->add_option("--p", rb_p, "norm exponent (>= 2) or 'inf'");
  rb->add_option("--output,-o", rb_output);

  // ---- tverberg ----
  auto* tv = app.add_subcommand("tverberg", "approximate Tverberg partition");
  std::string tv_input;
  int tv_r = 2;
  double tv_eps = 0.1;
  std::string tv_p = "2";
  std::optional<std::string> tv_output;
  tv->add_option("--input", tv_input, "JSON with points")->required();
  tv->add_option("--r", tv_r, "number of parts")->required();
  tv->add_option("--eps", tv_eps);
  tv->add_option("--p", tv_p, "norm exponent (>= 2) or 'inf'");
  tv->add_option("--output,-o", tv_output);

  // ---- lowerbound ----
  auto* lb = app.add_subcommand("lowerbound", "sparsity lower-bound sweep");
  int lb_d = 100;
  double lb_p = 2.0, lb_eps = 0.1;
  std::optional<std::string> lb_output;
  lb->add_option("--d", lb_d)->required();
  lb->add_option("--p", lb_p)->required();
  lb->add_option("--eps", lb_eps)->required();
  lb->add_option("--output,-o", lb_output);

  err << kVersion << "\n";

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::CallForHelp&) {
    out << app.help() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "argument error: " << e.what() << "\n";
    return 1;
  }

  auto parse_norm = [](const std::string& text) {
    if (text == "inf") return NormSpec::inf();
    try {
      return NormSpec::finite(std::stod(text));
    } catch (const std::exception&) {
      throw ParseError("option '--p' must be a number >= 2 or 'inf'");
    }
  };

  try {
    if (sp->parsed()) {
      SparsifyRequest req = sparsify_request_from_json(detail::load_json(sp_input));
      SparsifyResult res =
          req.norm.is_inf ? sparsify_infinity(req, sp_seed) : sparsify(req, sp_seed);
      return detail::emit(sparsify_result_to_json(res), sp_output, out, 0);
    }
    if (nsolve->parsed()) {
      BimatrixGame g = game_from_json(detail::load_json(nash_game));
      NashSolveReport rep = solve_sparse_nash(g, nash_flags.to_config());
      return detail::emit_nash_report(rep, nash_flags.output, out);
    }
    if (nverify->parsed()) {
      BimatrixGame g = game_from_json(detail::load_json(nv_game));
      MixedProfile prof{vec_from_json(detail::parse_inline(nv_x, "--x"), "x"),
                        vec_from_json(detail::parse_inline(nv_y, "--y"), "y")};
      EquilibriumCertificate cert = verify_eps_nash(g, prof);
      return detail::emit(certificate_to_json(cert), nv_output, out, 0);
    }
    if (noracle->parsed()) {
      BimatrixGame g = game_from_json(detail::load_json(no_game));
      Json eqs = Json::array();
      for (const MixedProfile& prof : exact_nash_oracle(g))
        eqs.push_back(Json{{"x", vec_to_json(prof.x)}, {"y", vec_to_json(prof.y)}});
      return detail::emit(Json{{"equilibria", eqs}}, no_output, out, 0);
    }
    if (nsmall->parsed()) {
      BimatrixGame g = game_from_json(detail::load_json(nsp_game));
      NashSolveReport rep = solve_small_prob(g, nsp_m, nsp_flags.to_config());
      return detail::emit_nash_report(rep, nsp_flags.output, out);
    }
    if (nboth->parsed()) {
      BimatrixGame g = game_from_json(detail::load_json(nbs_game));
      NashSolveReport rep = solve_both_sparse(g, nbs_flags.to_config());
      return detail::emit_nash_report(rep, nbs_flags.output, out);
    }
    if (ndsolve->parsed()) {
      NDkSInstance inst(graph_from_json(detail::load_json(nd_graph)), nd_k);
      SubgraphSolution s = solve_ndks(inst, nd_flags.to_config());
      return detail::emit(subgraph_to_json(s), nd_flags.output, out, 0);
    }
    if (ndbrute->parsed()) {
      NDkSInstance inst(graph_from_json(detail::load_json(ndb_graph)), ndb_k);
      return detail::emit(subgraph_to_json(ndks_bruteforce(inst)), ndb_output, out, 0);
    }
    if (dbsolve->parsed()) {
      Graph g = graph_from_json(detail::load_json(db_graph));
      BipartiteSolution s = solve_dkbs(g, db_k, db_flags.to_config());
      return detail::emit(bipartite_to_json(s), db_flags.output, out, 0);
    }
    if (dbbrute->parsed()) {
      Graph g = graph_from_json(detail::load_json(dbb_graph));
      return detail::emit(bipartite_to_json(dkbs_bruteforce(g, dbb_k)), dbb_output, out, 0);
    }
    if (bdec->parsed()) {
      DoublyStochastic ds(matrix_from_json(detail::load_json(bd_matrix), "matrix"));
      PermutationDecomposition pd = birkhoff_decompose(ds);
      return detail::emit(decomposition_to_json(pd), bd_output, out, 0);
    }
    if (bapprox->parsed()) {
      DoublyStochastic ds(matrix_from_json(detail::load_json(ba_matrix), "matrix"));
      ApproxBvnResult r = approx_bvn(ds, ba_eps, ba_seed, ba_retries);
      Json j = decomposition_to_json(r.decomposition);
      j["inf_error"] = r.inf_error;
      j["sample_count_k"] = r.sample_count_k;
      j["retries_used"] = r.retries_used;
      j["accepted"] = r.accepted;
      return detail::emit(j, ba_output, out, 0);
    }
    if (rb->parsed()) {
      Json j = detail::load_json(rb_input);
      const Json& cls = jsond::field(j, "classes");
      if (!cls.is_array() || cls.empty()) throw ParseError("field 'classes' must be an array");
      std::vector<PointSet> classes;
      for (const auto& c : cls) {
        std::vector<Vec> pts;
        for (const auto& p : c) pts.push_back(vec_from_json(p, "classes"));
        classes.push_back(PointSet(std::move(pts)));
      }
      ColorClasses cc(std::move(classes), vec_from_json(jsond::field(j, "mu"), "mu"));
      auto res = find_rainbow(cc, rb_eps, parse_norm(rb_p));
      if (!res) return detail::emit(Json{{"status", "NOT_FOUND"}}, rb_output, out, 2);
      return detail::emit(rainbow_to_json(*res), rb_output, out, 0);
    }
    if (tv->parsed()) {
      Json j = detail::load_json(tv_input);
      const Json& pts = jsond::field(j, "points");
      std::vector<Vec> points;
      for (const auto& p : pts) points.push_back(vec_from_json(p, "points"));
      TverbergInstance inst(PointSet(std::move(points)), tv_r, tv_eps, parse_norm(tv_p));
      auto res = find_tverberg_partition(inst);
      if (!res) return detail::emit(Json{{"status", "NOT_FOUND"}}, tv_output, out, 2);
      return detail::emit(tverberg_to_json(*res), tv_output, out, 0);
    }
    if (lb->parsed()) {
      LowerBoundReport rep = verify_lower_bound(LowerBoundCase(lb_d, lb_p, lb_eps));
      return detail::emit(lower_bound_report_to_json(rep), lb_output, out, 0);
    }
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << "\n";
    return 1;
  }
  err << "argument error: no subcommand selected\n";
  return 1;
}

}  // namespace carath::cli
