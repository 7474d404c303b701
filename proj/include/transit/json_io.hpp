#pragma once

// Strict JSON (de)serialization of the library's value types.
//
// Every object parser names the keys it accepts; anything else is a
// validation error. Complex scalars are [re, im] pairs (a bare number is
// read as a real scalar).

#include <json.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "transit/commutant.hpp"
#include "transit/commutative_measure.hpp"
#include "transit/star_algebra.hpp"
#include "transit/weyl_vector.hpp"

namespace transit::json_io {

using Json = nlohmann::json;

inline constexpr const char* kSchema = "transit/1";

inline void expect_object(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected a JSON object");
}

/// Rejects unknown keys and missing required keys.
inline void check_keys(const Json& j, const std::string& where, const std::set<std::string>& required,
                       const std::set<std::string>& optional = {}) {
  expect_object(j, where);
  for (const auto& [key, value] : j.items()) {
    if (!required.count(key) && !optional.count(key)) throw ValidationError(where + ": unknown key '" + key + "'");
  }
  for (const auto& key : required) {
    if (!j.contains(key)) throw ValidationError(where + ": missing key '" + key + "'");
  }
}

inline double get_number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ValidationError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ValidationError(where + ": non-finite number");
  return v;
}

inline double number_or(const Json& j, const std::string& key, double fallback, const std::string& where) {
  return j.contains(key) ? get_number(j.at(key), where + "." + key) : fallback;
}

inline long long get_integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ValidationError(where + ": expected an integer");
  return j.get<long long>();
}

inline bool get_bool(const Json& j, const std::string& where) {
  if (!j.is_boolean()) throw ValidationError(where + ": expected true or false");
  return j.get<bool>();
}

inline std::string get_string(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ValidationError(where + ": expected a string");
  return j.get<std::string>();
}

inline Complex get_complex(const Json& j, const std::string& where) {
  if (j.is_number()) return {get_number(j, where), 0.0};
  if (!j.is_array() || j.size() != 2) throw ValidationError(where + ": expected [re, im]");
  return {get_number(j[0], where + "[0]"), get_number(j[1], where + "[1]")};
}

inline std::vector<double> get_real_list(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

// ---------------------------------------------------------------------------
// Matrices and vectors

inline Matrix parse_matrix(const Json& j, const std::string& where) {
  check_keys(j, where, {"rows", "cols", "data"});
  const long long rows = get_integer(j.at("rows"), where + ".rows");
  const long long cols = get_integer(j.at("cols"), where + ".cols");
  if (rows <= 0 || cols <= 0 || rows > 4096 || cols > 4096) throw ValidationError(where + ": bad dimensions");
  const Json& data = j.at("data");
  if (!data.is_array() || static_cast<long long>(data.size()) != rows * cols) {
    throw ValidationError(where + ".data: expected " + std::to_string(rows * cols) + " entries (row-major)");
  }
  Matrix m(rows, cols);
  for (long long r = 0; r < rows; ++r)
    for (long long c = 0; c < cols; ++c) {
      const auto k = static_cast<std::size_t>(r * cols + c);
      m(r, c) = get_complex(data[k], where + ".data[" + std::to_string(k) + "]");
    }
  return m;
}

/// Hermitian input; an anti-Hermitian part above 1e-6 (relative) is rejected
/// rather than silently symmetrized away.
inline HermitianMatrix parse_hermitian(const Json& j, const std::string& where) {
  const Matrix m = parse_matrix(j, where);
  if (m.rows() != m.cols()) throw ValidationError(where + ": expected a square matrix");
  const double skew = max_abs(m - m.adjoint());
  if (skew > 1e-6 * std::max(1.0, max_abs(m))) {
    throw ValidationError(where + ": matrix is not Hermitian (max |A - A^H| = " + std::to_string(skew) + ")");
  }
  return HermitianMatrix(m);
}

inline Vector parse_vector(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ValidationError(where + ": expected a nonempty array of [re, im]");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = get_complex(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

inline Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json matrix_json(const Matrix& m) {
  Json data = Json::array();
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) data.push_back(complex_json(m(r, c)));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

inline Json real_list_json(const std::vector<double>& v) { return Json(v); }

// ---------------------------------------------------------------------------
// Algebra types

inline Representation parse_representation(const Json& j, const std::string& where) {
  check_keys(j, where, {"dim", "generators"});
  const long long dim = get_integer(j.at("dim"), where + ".dim");
  if (dim <= 0) throw ValidationError(where + ".dim: must be positive");
  const Json& g = j.at("generators");
  expect_object(g, where + ".generators");
  std::map<std::string, Matrix> gens;
  for (const auto& [name, m] : g.items()) gens.emplace(name, parse_matrix(m, where + ".generators." + name));
  return Representation(static_cast<Index>(dim), std::move(gens));
}

inline Functional parse_functional(const Json& j, const std::string& where) {
  expect_object(j, where);
  const std::string kind = get_string(j.value("kind", Json()), where + ".kind");
  if (kind == "vector") {
    check_keys(j, where, {"kind", "vector"});
    return Functional::vector(parse_vector(j.at("vector"), where + ".vector"));
  }
  if (kind == "trace") {
    check_keys(j, where, {"kind", "density"});
    return Functional::trace(parse_hermitian(j.at("density"), where + ".density"));
  }
  throw ValidationError(where + ".kind: expected \"vector\" or \"trace\"");
}

inline Json subspace_json(const OperatorSubspace& s) {
  Json basis = Json::array();
  for (const auto& b : s.basis()) basis.push_back(matrix_json(b));
  return {{"dimension", s.dimension()}, {"basis", std::move(basis)}};
}

inline Json decomposition_json(const BlockDecomposition& d) {
  Json blocks = Json::array();
  for (const auto& b : d.blocks) blocks.push_back({{"m", b.m}, {"n", b.n}, {"isometry", matrix_json(b.isometry)}});
  return {{"blocks", std::move(blocks)}, {"residual", d.residual}, {"attempts", d.attempts}};
}

// ---------------------------------------------------------------------------
// Measures and densities

inline MeasureSpec parse_measure(const Json& j, const std::string& where) {
  expect_object(j, where);
  const std::string kind = get_string(j.value("kind", Json()), where + ".kind");
  if (kind == "atoms") {
    check_keys(j, where, {"kind", "atoms"});
    const Json& a = j.at("atoms");
    if (!a.is_array()) throw ValidationError(where + ".atoms: expected [[x, w], ...]");
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string w = where + ".atoms[" + std::to_string(i) + "]";
      if (!a[i].is_array() || a[i].size() != 2) throw ValidationError(w + ": expected [x, w]");
      pts.emplace_back(get_number(a[i][0], w), get_number(a[i][1], w));
    }
    return MeasureSpec::atoms(std::move(pts));
  }
  if (kind == "lebesgue") {
    check_keys(j, where, {"kind", "a", "b"}, {"scale"});
    return lebesgue_measure(get_number(j.at("a"), where + ".a"), get_number(j.at("b"), where + ".b"),
                            number_or(j, "scale", 1.0, where));
  }
  if (kind == "gaussian") {
    check_keys(j, where, {"kind"}, {"mean", "sigma"});
    return gaussian_measure(number_or(j, "mean", 0.0, where), number_or(j, "sigma", 1.0, where));
  }
  if (kind == "lognormal") {
    check_keys(j, where, {"kind"}, {"mu", "sigma"});
    return lognormal_measure(number_or(j, "mu", 0.0, where), number_or(j, "sigma", 1.0, where));
  }
  if (kind == "bump") {
    check_keys(j, where, {"kind", "a", "b"});
    return bump_measure(get_number(j.at("a"), where + ".a"), get_number(j.at("b"), where + ".b"));
  }
  throw ValidationError(where + ".kind: unknown measure '" + kind + "'");
}

/// One of η, ξ from the built-in registry. `values` (per atom) needs the
/// measure's atom list.
inline std::pair<RealFunction, std::vector<double>> parse_density_function(const Json& j, const MeasureSpec& mu,
                                                                           const std::string& where) {
  expect_object(j, where);
  const std::string kind = get_string(j.value("kind", Json()), where + ".kind");
  if (kind == "constant") {
    check_keys(j, where, {"kind", "c"});
    const double c = get_number(j.at("c"), where + ".c");
    return {[c](double) { return c; }, {}};
  }
  if (kind == "linear") {
    check_keys(j, where, {"kind", "c0", "c1"});
    const double c0 = get_number(j.at("c0"), where + ".c0");
    const double c1 = get_number(j.at("c1"), where + ".c1");
    return {[c0, c1](double x) { return c0 + c1 * x; }, {}};
  }
  if (kind == "piecewise_constant") {
    check_keys(j, where, {"kind", "breaks", "values"});
    auto breaks = get_real_list(j.at("breaks"), where + ".breaks");
    auto values = get_real_list(j.at("values"), where + ".values");
    if (values.size() != breaks.size() + 1) throw ValidationError(where + ": need len(values) = len(breaks) + 1");
    for (std::size_t i = 1; i < breaks.size(); ++i)
      if (!(breaks[i - 1] < breaks[i])) throw ValidationError(where + ".breaks: must be strictly increasing");
    return {[breaks, values](double x) {
              const auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
              return values[static_cast<std::size_t>(it - breaks.begin())];
            },
            breaks};
  }
  if (kind == "stieltjes_plus" || kind == "stieltjes_minus") {
    check_keys(j, where, {"kind"});
    const double sign = kind == "stieltjes_plus" ? 1.0 : -1.0;
    return {[sign](double x) { return x <= 0.0 ? 1.0 : 1.0 + sign * std::sin(2.0 * std::numbers::pi * std::log(x)); },
            {}};
  }
  if (kind == "values") {
    check_keys(j, where, {"kind", "values"});
    if (mu.kind() != MeasureSpec::Kind::atoms) throw ValidationError(where + ": 'values' requires an atom measure");
    auto values = get_real_list(j.at("values"), where + ".values");
    if (values.size() != mu.atom_list().size()) throw ValidationError(where + ": one value per atom is required");
    std::vector<std::pair<double, double>> table;
    for (std::size_t i = 0; i < values.size(); ++i) table.emplace_back(mu.atom_list()[i].first, values[i]);
    return {[table](double x) {
              for (const auto& [p, v] : table)
                if (p == x) return v;
              return 0.0;
            },
            {}};
  }
  throw ValidationError(where + ".kind: unknown density '" + kind + "'");
}

inline DensityPair parse_density_pair(const Json& eta, const Json& xi, const MeasureSpec& mu, const std::string& where) {
  auto [fe, be] = parse_density_function(eta, mu, where + ".eta");
  auto [fx, bx] = parse_density_function(xi, mu, where + ".xi");
  DensityPair p;
  p.eta = std::move(fe);
  p.xi = std::move(fx);
  p.breakpoints = std::move(be);
  p.breakpoints.insert(p.breakpoints.end(), bx.begin(), bx.end());
  return p;
}

// ---------------------------------------------------------------------------
// Weyl functions

inline SmoothBumpFunction parse_bump_function(const Json& j, const std::string& where) {
  expect_object(j, where);
  const std::string profile = j.contains("profile") ? get_string(j.at("profile"), where + ".profile") : "canonical-bump";
  if (profile == "canonical-bump") {
    check_keys(j, where, {"intervals"}, {"coeffs", "profile"});
  } else if (profile == "tabulated") {
    check_keys(j, where, {"intervals", "profile", "grid", "values"}, {"coeffs"});
  } else {
    throw ValidationError(where + ".profile: expected \"canonical-bump\" or \"tabulated\"");
  }
  const Json& iv = j.at("intervals");
  if (!iv.is_array() || iv.empty()) throw ValidationError(where + ".intervals: expected [[a, b], ...]");
  std::vector<Interval> intervals;
  for (std::size_t i = 0; i < iv.size(); ++i) {
    const std::string w = where + ".intervals[" + std::to_string(i) + "]";
    if (!iv[i].is_array() || iv[i].size() != 2) throw ValidationError(w + ": expected [a, b]");
    intervals.emplace_back(get_number(iv[i][0], w), get_number(iv[i][1], w));
  }
  std::vector<BumpComponent> comps(intervals.size());
  if (j.contains("coeffs")) {
    const Json& c = j.at("coeffs");
    if (!c.is_array() || c.size() != intervals.size()) throw ValidationError(where + ".coeffs: one per interval");
    for (std::size_t i = 0; i < c.size(); ++i) comps[i].coeff = get_complex(c[i], where + ".coeffs[" + std::to_string(i) + "]");
  }
  if (profile == "tabulated") {
    const Json& g = j.at("grid");
    const Json& v = j.at("values");
    if (!g.is_array() || !v.is_array() || g.size() != intervals.size() || v.size() != intervals.size()) {
      throw ValidationError(where + ": 'grid' and 'values' need one array per interval");
    }
    for (std::size_t i = 0; i < intervals.size(); ++i) {
      comps[i].profile = BumpComponent::Profile::tabulated;
      comps[i].grid = get_real_list(g[i], where + ".grid[" + std::to_string(i) + "]");
      comps[i].values = get_real_list(v[i], where + ".values[" + std::to_string(i) + "]");
    }
  }
  return SmoothBumpFunction(IntervalSet(std::move(intervals)), std::move(comps));
}

}  // namespace transit::json_io
