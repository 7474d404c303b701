#pragma once

// Vector functionals of the Schrödinger representation given by smooth
// functions supported on finitely many disjoint open intervals.

#include <algorithm>
#include <cmath>

// Boost 1.74's pchip calls isnan unqualified.
namespace boost::math::interpolators {
using std::isnan;
}

#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <complex>
#include <cstdlib>
#include <memory>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "transit/errors.hpp"

namespace transit {

using Interval = std::pair<double, double>;

/// Sorted, pairwise disjoint open intervals (α_l, β_l).
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
      const auto [a, b] = intervals_[i];
      if (!std::isfinite(a) || !std::isfinite(b)) throw ValidationError("IntervalSet: endpoints must be finite");
      if (!(a < b)) throw ValidationError("IntervalSet: interval " + std::to_string(i) + " has alpha >= beta");
      if (i > 0 && intervals_[i - 1].second > a) {
        throw ValidationError("IntervalSet: intervals must be sorted and disjoint (at index " + std::to_string(i) + ")");
      }
    }
  }

  const std::vector<Interval>& intervals() const noexcept { return intervals_; }
  std::size_t size() const noexcept { return intervals_.size(); }
  const Interval& operator[](std::size_t i) const { return intervals_.at(i); }

 private:
  std::vector<Interval> intervals_;
};

/// x ↦ exp(−1/((x−α)(β−x))) on (α, β), zero elsewhere.
inline double bump_value(double alpha, double beta, double x) {
  if (x <= alpha || x >= beta) return 0.0;
  return std::exp(-1.0 / ((x - alpha) * (beta - x)));
}

/// Profile of one support component: either the canonical bump or a
/// tabulated real profile interpolated by PCHIP, times a complex coefficient.
struct BumpComponent {
  enum class Profile { canonical, tabulated };
  Profile profile = Profile::canonical;
  std::complex<double> coeff{1.0, 0.0};
  std::vector<double> grid;
  std::vector<double> values;
  std::shared_ptr<const boost::math::interpolators::pchip<std::vector<double>>> spline;
};

/// A function satisfying condition (*): smooth, nonvanishing on each declared
/// interval and zero outside their union.
class SmoothBumpFunction {
 public:
  SmoothBumpFunction() = default;

  SmoothBumpFunction(IntervalSet support, std::vector<BumpComponent> components)
      : support_(std::move(support)), components_(std::move(components)) {
    if (components_.size() != support_.size()) {
      throw ValidationError("SmoothBumpFunction: one profile per interval is required");
    }
    for (std::size_t k = 0; k < components_.size(); ++k) prepare(k);
  }

  const IntervalSet& support() const noexcept { return support_; }
  const std::vector<BumpComponent>& components() const noexcept { return components_; }

  /// True when every component uses the canonical bump (condition (*) then
  /// holds analytically rather than by assumption).
  bool analytic() const {
    return std::all_of(components_.begin(), components_.end(),
                       [](const auto& c) { return c.profile == BumpComponent::Profile::canonical; });
  }

  std::complex<double> operator()(double x) const {
    const auto& iv = support_.intervals();
    auto it = std::upper_bound(iv.begin(), iv.end(), x, [](double v, const Interval& i) { return v < i.second; });
    if (it == iv.end() || x <= it->first) return 0.0;
    return component_value(static_cast<std::size_t>(it - iv.begin()), x);
  }

  /// Value of component k at x, assuming x in its interval.
  std::complex<double> component_value(std::size_t k, double x) const {
    const auto& c = components_[k];
    const auto [a, b] = support_[k];
    if (x <= a || x >= b) return 0.0;
    if (c.profile == BumpComponent::Profile::canonical) return c.coeff * bump_value(a, b, x);
    return c.coeff * (*c.spline)(x);
  }

  /// Multiply every coefficient by z.
  SmoothBumpFunction scaled(std::complex<double> z) const {
    SmoothBumpFunction out = *this;
    for (auto& c : out.components_) c.coeff *= z;
    return out;
  }

 private:
  void prepare(std::size_t k) {
    auto& c = components_[k];
    const auto [a, b] = support_[k];
    if (!std::isfinite(c.coeff.real()) || !std::isfinite(c.coeff.imag()) || std::abs(c.coeff) == 0.0) {
      throw ValidationError("SmoothBumpFunction: coefficient of interval " + std::to_string(k) + " must be nonzero");
    }
    if (c.profile == BumpComponent::Profile::canonical) return;
    const std::string where = "SmoothBumpFunction: tabulated interval " + std::to_string(k);
    if (c.grid.size() != c.values.size() || c.grid.size() < 4) {
      throw ValidationError(where + " needs matching grid/values with at least 4 points");
    }
    for (std::size_t i = 1; i < c.grid.size(); ++i)
      if (!(c.grid[i - 1] < c.grid[i])) throw ValidationError(where + ": grid must be strictly increasing");
    for (double v : c.values)
      if (!std::isfinite(v)) throw ValidationError(where + ": non-finite sample");
    if (c.grid.front() != a || c.grid.back() != b) {
      throw ValidationError(where + ": grid must start and end at the interval endpoints");
    }
    if (c.values.front() != 0.0 || c.values.back() != 0.0) {
      throw ValidationError(where + ": profile must vanish at the interval endpoints");
    }
    for (std::size_t i = 1; i + 1 < c.values.size(); ++i) {
      if (c.values[i] == 0.0) throw ValidationError(where + ": profile vanishes inside the interval");
    }
    for (std::size_t i = 2; i + 1 < c.values.size(); ++i) {
      if ((c.values[i] > 0.0) != (c.values[1] > 0.0)) {
        throw ValidationError(where + ": profile changes sign inside the interval");
      }
    }
    c.spline = std::make_shared<const boost::math::interpolators::pchip<std::vector<double>>>(
        std::vector<double>(c.grid), std::vector<double>(c.values));
  }

  IntervalSet support_;
  std::vector<BumpComponent> components_;
};

inline SmoothBumpFunction canonical_bump(double alpha, double beta) {
  if (!(alpha < beta)) throw ValidationError("canonical_bump: need alpha < beta");
  return SmoothBumpFunction(IntervalSet({{alpha, beta}}), {BumpComponent{}});
}

/// Canonical bumps on each interval with the given coefficients.
inline SmoothBumpFunction bump_sum(std::vector<Interval> intervals, std::vector<std::complex<double>> coeffs) {
  if (coeffs.size() != intervals.size()) throw ValidationError("bump_sum: one coefficient per interval");
  std::vector<BumpComponent> comps;
  for (auto z : coeffs) {
    BumpComponent c;
    c.coeff = z;
    comps.push_back(std::move(c));
  }
  return SmoothBumpFunction(IntervalSet(std::move(intervals)), std::move(comps));
}

struct ComponentIntersection {
  std::size_t k = 0;  ///< index in the first set
  std::size_t l = 0;  ///< index in the second set
  Interval interval;
};

/// Nonempty pairwise intersections, sorted by position.
inline std::vector<ComponentIntersection> component_intersections(const IntervalSet& a, const IntervalSet& b) {
  std::vector<ComponentIntersection> out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].first, b[j].first);
    const double hi = std::min(a[i].second, b[j].second);
    if (lo < hi) out.push_back({i, j, {lo, hi}});
    if (a[i].second < b[j].second) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

struct WeylOptions {
  double quad_tol = 1e-10;
  /// Worker cap; 0 reads TRANSIT_THREADS (default 1).
  int threads = 0;
};

inline int transit_threads() {
  if (const char* env = std::getenv("TRANSIT_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

namespace detail {

struct ComplexIntegral {
  std::complex<double> value;
  double error = 0.0;
  double l1 = 0.0;
};

/// ∫_a^b f with tanh-sinh on the real and imaginary parts.
template <class F>
ComplexIntegral tanh_sinh_complex(const F& f, double a, double b, double tol) {
  boost::math::quadrature::tanh_sinh<double> ts;
  double err_re = 0.0, err_im = 0.0, l1_re = 0.0, l1_im = 0.0;
  const double re = ts.integrate([&](double x) { return f(x).real(); }, a, b, tol, &err_re, &l1_re);
  const double im = ts.integrate([&](double x) { return f(x).imag(); }, a, b, tol, &err_im, &l1_im);
  return {{re, im}, std::hypot(err_re, err_im), l1_re + l1_im};
}

/// Same, summed over the cells of `cuts` (a sorted partition of [a, b]).
template <class F>
ComplexIntegral tanh_sinh_complex(const F& f, const std::vector<double>& cuts, double tol) {
  ComplexIntegral out{};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto r = tanh_sinh_complex(f, cuts[i], cuts[i + 1], tol);
    out.value += r.value;
    out.error += r.error;
    out.l1 += r.l1;
  }
  return out;
}

/// Interval endpoints plus the interior grid nodes of tabulated profiles.
inline std::vector<double> cell_cuts(double a, double b, const BumpComponent& p, const BumpComponent& q) {
  std::vector<double> cuts{a, b};
  for (const auto* c : {&p, &q})
    if (c->profile == BumpComponent::Profile::tabulated)
      for (double x : c->grid)
        if (x > a && x < b) cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

}  // namespace detail

struct WeylTerm {
  ComponentIntersection component;
  std::complex<double> integral;
  double error = 0.0;
};

struct WeylResult {
  double probability = 0.0;
  std::vector<WeylTerm> terms;
  double error = 0.0;  ///< propagated bound on the error of `probability`
  std::vector<std::string> trust_assumptions;
};

/// (Σ_components |∫ φ ψ̄|)² over the connected components of J(φ)∩J(ψ).
inline WeylResult weyl_transition(const SmoothBumpFunction& phi, const SmoothBumpFunction& psi,
                                  const WeylOptions& opts = {}) {
  WeylResult out;
  const auto comps = component_intersections(phi.support(), psi.support());
  out.terms.resize(comps.size());
  std::vector<std::string> failures(comps.size());

  auto work = [&](std::size_t idx) {
    const auto& c = comps[idx];
    auto f = [&](double x) { return phi.component_value(c.k, x) * std::conj(psi.component_value(c.l, x)); };
    try {
      const auto r = detail::tanh_sinh_complex(
          f, detail::cell_cuts(c.interval.first, c.interval.second, phi.components()[c.k], psi.components()[c.l]),
          opts.quad_tol);
      out.terms[idx] = {c, r.value, r.error};
      if (!std::isfinite(r.error) || r.error > std::max(1e-14, 1e3 * opts.quad_tol * r.l1)) {
        failures[idx] = "error estimate " + std::to_string(r.error);
      }
    } catch (const std::exception& e) {
      failures[idx] = e.what();
    }
  };

  const int cap = opts.threads > 0 ? opts.threads : transit_threads();
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, cap)), comps.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < comps.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < comps.size(); i += workers) work(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (!failures[i].empty()) {
      throw NumericalError("quadrature", "weyl_transition: component " + std::to_string(i) + " (k=" +
                                             std::to_string(comps[i].k) + ", l=" + std::to_string(comps[i].l) +
                                             "): " + failures[i],
                           {{"component", static_cast<double>(i)}, {"error_estimate", out.terms[i].error}});
    }
  }
  double amplitude = 0.0, err = 0.0;
  for (const auto& t : out.terms) {
    amplitude += std::abs(t.integral);
    err += t.error;
  }
  out.probability = amplitude * amplitude;
  out.error = 2.0 * amplitude * err + err * err;
  if (!phi.analytic() || !psi.analytic()) {
    out.trust_assumptions.push_back(
        "tabulated profiles: derivatives of all orders assumed to vanish at interval endpoints");
  }
  return out;
}

struct L2Inner {
  std::complex<double> value;
  double error = 0.0;
};

/// ∫ φ ψ̄ dx over the union of both supports, split at every endpoint.
inline L2Inner l2_inner(const SmoothBumpFunction& phi, const SmoothBumpFunction& psi, double tol = 1e-10) {
  std::vector<double> pts;
  for (const auto& [a, b] : phi.support().intervals()) {
    pts.push_back(a);
    pts.push_back(b);
  }
  for (const auto& [a, b] : psi.support().intervals()) {
    pts.push_back(a);
    pts.push_back(b);
  }
  for (const auto* f : {&phi, &psi})
    for (const auto& c : f->components())
      if (c.profile == BumpComponent::Profile::tabulated) pts.insert(pts.end(), c.grid.begin(), c.grid.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  L2Inner out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i], b = pts[i + 1];
    const double mid = 0.5 * (a + b);
    if (phi(mid) == 0.0 || psi(mid) == 0.0) continue;  // one side vanishes on this whole piece
    const auto r = detail::tanh_sinh_complex([&](double x) { return phi(x) * std::conj(psi(x)); }, a, b, tol);
    out.value += r.value;
    out.error += r.error;
  }
  return out;
}

inline double l2_norm(const SmoothBumpFunction& phi, double tol = 1e-10) {
  return std::sqrt(std::max(0.0, l2_inner(phi, phi, tol).value.real()));
}

}  // namespace transit
