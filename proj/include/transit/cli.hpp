#pragma once

// JSON-in/JSON-out job runner behind the `transit` command.

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "transit/json_io.hpp"
#include "transit/selftest.hpp"
#include "transit/transition.hpp"

namespace transit::cli {

using json_io::Json;

struct JobSpec {
  std::string command;
  std::string input;   ///< path, inline JSON (leading '{'), or empty
  std::string output;  ///< path or empty for stdout
  std::uint64_t seed = 0;
  std::optional<double> tol_block;
  std::optional<double> tol_quad;
  std::string level = "quick";
  bool debug_transpose_blocks = false;
};

struct RunResult {
  int exit_code = 0;
  Json document;
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"transition", "fidelity", "trace-transition", "uhlmann-check",
                                              "bhattacharyya", "moments", "stieltjes-demo", "weyl", "gns",
                                              "jacobi", "hankel", "commutant", "decompose", "selftest"};
  return names;
}

namespace detail {

inline Json load_input(const JobSpec& spec, bool required) {
  std::string text;
  const auto first = spec.input.find_first_not_of(" \t\r\n");
  if (spec.input.empty()) {
    if (required) throw ValidationError("--input is required for '" + spec.command + "'");
    return Json::object({{"schema", json_io::kSchema}});
  }
  if (spec.input[first] == '{') {
    text = spec.input;
  } else {
    std::ifstream in(spec.input);
    if (!in) throw ValidationError("cannot read input file '" + spec.input + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
  json_io::expect_object(j, "input");
  if (!j.contains("schema") || j.at("schema") != json_io::kSchema) {
    throw ValidationError(std::string("input: \"schema\" must be \"") + json_io::kSchema + "\"");
  }
  return j;
}

inline TransitionOptions transition_options(const JobSpec& spec) {
  TransitionOptions o;
  o.seed = spec.seed;
  if (spec.tol_block) o.wedderburn.block_tol = *spec.tol_block;
  o.transpose_blocks = spec.debug_transpose_blocks;
  return o;
}

inline QuadratureOptions quadrature_options(const JobSpec& spec) {
  QuadratureOptions q;
  if (spec.tol_quad) q.rel_tol = *spec.tol_quad;
  return q;
}

inline Json transition_json(const TransitionResult& r) {
  return {{"P", r.probability},
          {"route", r.route},
          {"certificate", r.certificate},
          {"optimal_T", json_io::matrix_json(r.optimal_contraction)},
          {"inner_product_sq", r.inner_product_sq},
          {"residuals", {{"block", r.block_residual}, {"commutant", r.commutant_residual},
                         {"certificate", std::abs(r.certificate - r.probability)}}}};
}

inline Json moments_hankel_report(const std::vector<double>& s) {
  const auto profile = hankel_psd_profile(s);
  return Json(std::vector<bool>(profile.begin(), profile.end()));
}

inline std::vector<double> parse_moments(const Json& j) { return json_io::get_real_list(j.at("moments"), "moments"); }

/// `status` is set to 1 when a selftest criterion fails.
inline Json run_command(const JobSpec& spec, int& status) {
  const std::string& cmd = spec.command;
  Json out;

  if (cmd == "transition") {
    const Json in = load_input(spec, true);
    json_io::check_keys(in, "input", {"schema", "representation", "phi", "psi"}, {"oracle"});
    const auto rep = json_io::parse_representation(in.at("representation"), "representation");
    const auto phi = json_io::parse_vector(in.at("phi"), "phi");
    const auto psi = json_io::parse_vector(in.at("psi"), "psi");
    out = transition_json(transition_probability(rep, phi, psi, transition_options(spec)));
    if (in.contains("oracle") && json_io::get_bool(in.at("oracle"), "oracle")) {
      const auto o = oracle_max_contraction(rep, phi, psi);
      out["oracle"] = {{"P", o.value}, {"iterations", o.iterations}};
    }
  } else if (cmd == "fidelity") {
    const Json in = load_input(spec, true);
    json_io::check_keys(in, "input", {"schema", "s", "t"});
    const auto s = json_io::parse_hermitian(in.at("s"), "s");
    const auto t = json_io::parse_hermitian(in.at("t"), "t");
    const double f = fidelity(s, t);
    const Matrix rs = psd_sqrt(s).matrix();
    const double alt = std::pow(psd_sqrt(HermitianMatrix(rs * t.matrix() * rs)).trace(), 2);
    out = {{"P", f}, {"route", "trace-formula"}, {"residuals", {{"uhlmann_form", std::abs(f - alt)}}}};
  } else if (cmd == "trace-transition") {
    const Json in = load_input(spec, true);
    json_io::check_keys(in, "input", {"schema", "representation", "s", "t"}, {"force_general"});
    TraceTransitionOptions o;
    o.transition = transition_options(spec);
    if (in.contains("force_general")) o.force_general = json_io::get_bool(in.at("force_general"), "force_general");
    const auto rep = json_io::parse_representation(in.at("representation"), "representation");
    out = transition_json(transition_trace_functionals(rep, json_io::parse_hermitian(in.at("s"), "s"),
                                                       json_io::parse_hermitian(in.at("t"), "t"), o));
  } else if (cmd == "uhlmann-check") {
    const Json in = load_input(spec, true);
    json_io::check_keys(in, "input", {"schema", "representation", "h", "b", "c"});
    const auto rep = json_io::parse_representation(in.at("representation"), "representation");
    const auto h = json_io::parse_functional(in.at("h"), "h");
    const auto r = uhlmann_deformation(rep, h, json_io::parse_matrix(in.at("b"), "b"),
                                       json_io::parse_matrix(in.at("c"), "c"), transition_options(spec));
    out = {{"lhs", r.lhs}, {"rhs", r.rhs}, {"psd_ok", r.psd_ok}, {"gap", std::abs(r.lhs - r.rhs)},
           {"route", r.transition.route}};
  } else if (cmd == "bhattacharyya") {
    const Json in = load_input(spec, true);
    json_io::check_keys(in, "input", {"schema", "measure", "eta", "xi"});
    auto mu = json_io::parse_measure(in.at("measure"), "measure");
    mu.set_quadrature(quadrature_options(spec));
    const auto pair = json_io::parse_density_pair(in.at("eta"), in.at("xi"), mu, "input");
    const auto r = bhattacharyya(mu, pair);
    out = {{"P", r.value}, {"integral", r.integral}, {"error_estimate", r.error}, {"route", "bhattacharyya"},
           {"note", "equals P only for determinate moment problems"}};
  } else if (cmd == "moments") {
    const Json in = load_input(spec, true);
    json_io::check_keys(in, "input", {"schema", "measure", "n_max"}, {"analytic_M"});
    auto mu = json_io::parse_measure(in.at("measure"), "measure");
    mu.set_quadrature(quadrature_options(spec));
    const auto n_max = json_io::get_integer(in.at("n_max"), "n_max");
    if (n_max < 0 || n_max > 200) throw ValidationError("n_max: must be in 0..200");
    const auto r = measure_moments(mu, static_cast<int>(n_max));
    out = {{"moments", r.values}, {"error_estimates", r.errors}, {"hankel_psd", moments_hankel_report(r.values)}};
    if (in.contains("analytic_M")) {
      const auto rep = analytic_vector_check(r.values, json_io::get_number(in.at("analytic_M"), "analytic_M"));
      out["analytic_vector"] = {{"n", rep.n}, {"holds", std::vector<bool>(rep.holds.begin(), rep.holds.end())},
                                {"verdict", rep.verdict}};
    }
  } else if (cmd == "stieltjes-demo") {
    const Json in = load_input(spec, false);
    json_io::check_keys(in, "input", {"schema"}, {"d"});
    const auto d = in.contains("d") ? json_io::get_integer(in.at("d"), "d") : 10;
    const auto r = stieltjes_demo(static_cast<int>(d), quadrature_options(spec));
    out = {{"moment_diff", r.moment_diff},
           {"J", r.j},
           {"J_error_estimate", r.j_error},
           {"P_claim", r.p_claim},
           {"eta_plus_xi_max_deviation", r.eta_plus_xi_max_dev},
           {"moments_eta", r.moments_plus},
           {"moments_xi", r.moments_minus},
           {"moment_error_estimates", r.moment_errors},
           {"measure", "lognormal(0,1), eta = 1 + sin(2 pi ln x), xi = 1 - sin(2 pi ln x)"}};
  } else if (cmd == "weyl") {
    const Json in = load_input(spec, true);
    json_io::check_keys(in, "input", {"schema", "phi", "psi"});
    const auto phi = json_io::parse_bump_function(in.at("phi"), "phi");
    const auto psi = json_io::parse_bump_function(in.at("psi"), "psi");
    WeylOptions o;
    if (spec.tol_quad) o.quad_tol = *spec.tol_quad;
    const auto r = weyl_transition(phi, psi, o);
    const auto inner = l2_inner(phi, psi, o.quad_tol);
    Json terms = Json::array();
    for (const auto& t : r.terms) {
      terms.push_back({{"k", t.component.k},
                       {"l", t.component.l},
                       {"interval", {t.component.interval.first, t.component.interval.second}},
                       {"integral", json_io::complex_json(t.integral)},
                       {"error_estimate", t.error}});
    }
    out = {{"P", r.probability},
           {"error_estimate", r.error},
           {"terms", std::move(terms)},
           {"inner_product_sq", std::norm(inner.value)},
           {"inner_product", json_io::complex_json(inner.value)},
           {"route", "weyl-intervals"},
           {"trust_assumptions", r.trust_assumptions}};
  } else if (cmd == "gns") {
    const Json in = load_input(spec, true);
    json_io::check_keys(in, "input", {"schema", "density"}, {"representation"});
    const auto t = json_io::parse_hermitian(in.at("density"), "density");
    const GnsResult g = in.contains("representation")
                            ? gns_from_density(json_io::parse_representation(in.at("representation"), "representation"), t)
                            : gns_from_density(t.rows(), t);
    Json gens = Json::object();
    for (const auto& [name, m] : g.rep.generators()) gens[name] = json_io::matrix_json(m);
    out = {{"representation", {{"dim", g.rep.dim()}, {"generators", std::move(gens)}}},
           {"cyclic", json_io::vector_json(g.cyclic)},
           {"gram", json_io::matrix_json(g.gram.matrix())},
           {"cyclic_rank", g.cyclic_rank}};
  } else if (cmd == "jacobi") {
    const Json in = load_input(spec, true);
    json_io::check_keys(in, "input", {"schema", "moments"}, {"analytic_M"});
    const MomentSequence m(parse_moments(in));
    const auto jm = jacobi_from_moments(m);
    const auto rec = jm.reconstruct_moments(m[0], 2 * m.degree() - 1);
    double gap = 0.0;
    for (std::size_t n = 0; n < rec.size(); ++n) gap = std::max(gap, std::abs(rec[n] - m[n]) / std::max(1.0, std::abs(m[n])));
    out = {{"a", jm.a}, {"b", jm.b}, {"reconstructed_moments", rec}, {"reconstruction_residual", gap}};
    if (in.contains("analytic_M")) {
      const auto rep = analytic_vector_check(m, json_io::get_number(in.at("analytic_M"), "analytic_M"));
      out["analytic_vector"] = {{"n", rep.n}, {"holds", std::vector<bool>(rep.holds.begin(), rep.holds.end())},
                                {"verdict", rep.verdict}};
    }
  } else if (cmd == "hankel") {
    const Json in = load_input(spec, true);
    json_io::check_keys(in, "input", {"schema", "moments", "k"});
    const MomentSequence m(parse_moments(in));
    const auto k = json_io::get_integer(in.at("k"), "k");
    out = {{"H", json_io::matrix_json(hankel(m, static_cast<Index>(k)).matrix())},
           {"psd_profile", moments_hankel_report(m.values())}};
  } else if (cmd == "commutant") {
    const Json in = load_input(spec, true);
    json_io::check_keys(in, "input", {"schema", "representation"});
    const auto rep = json_io::parse_representation(in.at("representation"), "representation");
    const auto n = commutant(rep);
    out = json_io::subspace_json(n);
    out["orthonormality_residual"] = n.orthonormality_error();
  } else if (cmd == "decompose") {
    const Json in = load_input(spec, true);
    json_io::check_keys(in, "input", {"schema", "representation"}, {"target"});
    const auto rep = json_io::parse_representation(in.at("representation"), "representation");
    const std::string target = in.contains("target") ? json_io::get_string(in.at("target"), "target") : "algebra";
    OperatorSubspace s;
    if (target == "algebra") {
      s = algebra_basis(rep);
    } else if (target == "commutant") {
      s = commutant(rep);
    } else {
      throw ValidationError("target: expected \"algebra\" or \"commutant\"");
    }
    WedderburnOptions o;
    if (spec.tol_block) o.block_tol = *spec.tol_block;
    out = json_io::decomposition_json(wedderburn_decompose(s, spec.seed, o));
    out["target"] = target;
    out["dimension"] = s.dimension();
  } else if (cmd == "selftest") {
    if (!spec.input.empty()) throw ValidationError("selftest takes no --input");
    SelftestOptions o;
    if (spec.level == "quick") {
      o.level = SelftestLevel::quick;
    } else if (spec.level == "full") {
      o.level = SelftestLevel::full;
    } else {
      throw ValidationError("--level must be quick or full");
    }
    o.seed = spec.seed;
    o.transpose_blocks = spec.debug_transpose_blocks;
    if (spec.tol_block) o.block_tol = *spec.tol_block;
    const auto reports = run_selftest(o);
    Json list = Json::array();
    bool all = true;
    for (const auto& r : reports) {
      all = all && r.pass;
      list.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"observed", r.observed},
                      {"tolerance", r.tolerance}, {"instances", r.instances}, {"detail", r.detail}});
    }
    out = {{"level", spec.level}, {"criteria", std::move(list)}, {"all_passed", all}};
    if (!all) status = 1;
  } else {
    throw ValidationError("unknown command '" + cmd + "'");
  }
  return out;
}

}  // namespace detail

/// Runs a job. Exit code 0 on success, 1 when a selftest criterion fails,
/// 2 on validation errors, 3 on numerical failures; the document is the
/// result or {"error": …}.
inline RunResult run(const JobSpec& spec) {
  RunResult r;
  try {
    int status = 0;
    r.document = detail::run_command(spec, status);
    r.document["schema"] = json_io::kSchema;
    r.document["command"] = spec.command;
    r.document["seed"] = spec.seed;
    r.exit_code = status;
  } catch (const ValidationError& e) {
    r.exit_code = 2;
    r.document = {{"schema", json_io::kSchema}, {"error", {{"kind", e.kind()}, {"detail", e.what()}}}};
  } catch (const NumericalError& e) {
    r.exit_code = 3;
    r.document = {{"schema", json_io::kSchema},
                  {"error", {{"kind", e.kind()}, {"detail", e.what()}, {"diagnostics", e.diagnostics()}}}};
  } catch (const Json::exception& e) {
    r.exit_code = 2;
    r.document = {{"schema", json_io::kSchema}, {"error", {{"kind", "validation"}, {"detail", e.what()}}}};
  }
  return r;
}

}  // namespace transit::cli
