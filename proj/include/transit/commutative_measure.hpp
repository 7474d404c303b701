#pragma once

// Commutative case: Bhattacharyya integrals over measures on ℝ, moments by
// quadrature, and the log-normal Stieltjes-class example.

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "transit/gns.hpp"
#include "transit/quadrature.hpp"

namespace transit {

using RealFunction = std::function<double(double)>;

/// A positive measure on ℝ: finitely many atoms, or a density on an interval.
class MeasureSpec {
 public:
  enum class Kind { atoms, density };

  static MeasureSpec atoms(std::vector<std::pair<double, double>> points) {
    if (points.empty()) throw ValidationError("MeasureSpec: atom list is empty");
    for (const auto& [x, w] : points) {
      if (!std::isfinite(x) || !std::isfinite(w)) throw ValidationError("MeasureSpec: non-finite atom");
      if (!(w > 0.0)) throw ValidationError("MeasureSpec: atom weights must be positive");
    }
    MeasureSpec m;
    m.kind_ = Kind::atoms;
    m.atoms_ = std::move(points);
    return m;
  }

  /// Density ρ on (lo, hi); endpoints may be infinite. `breakpoints` mark
  /// kinks of ρ. ρ is sampled for nonnegativity.
  static MeasureSpec density(RealFunction rho, double lo, double hi, std::vector<double> breakpoints = {},
                             QuadratureOptions quad = {}) {
    if (!(lo < hi)) throw ValidationError("MeasureSpec: support must satisfy lo < hi");
    MeasureSpec m;
    m.kind_ = Kind::density;
    m.rho_ = std::move(rho);
    m.lo_ = lo;
    m.hi_ = hi;
    m.breaks_ = std::move(breakpoints);
    m.quad_ = quad;
    for (double x : m.sample_points()) {
      const double v = m.rho_(x);
      if (!std::isfinite(v) || v < 0.0) {
        throw ValidationError("MeasureSpec: density is negative or non-finite at x=" + std::to_string(x));
      }
    }
    return m;
  }

  Kind kind() const noexcept { return kind_; }
  const std::vector<std::pair<double, double>>& atom_list() const noexcept { return atoms_; }
  const RealFunction& rho() const noexcept { return rho_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  const std::vector<double>& breakpoints() const noexcept { return breaks_; }
  const QuadratureOptions& quadrature() const noexcept { return quad_; }
  void set_quadrature(const QuadratureOptions& q) { quad_ = q; }

  /// Sample points in the support used for sign checks.
  std::vector<double> sample_points(int count = 257) const {
    if (kind_ == Kind::atoms) {
      std::vector<double> xs;
      for (const auto& a : atoms_) xs.push_back(a.first);
      return xs;
    }
    std::vector<double> xs;
    for (int i = 1; i < count; ++i) {
      const double t = static_cast<double>(i) / count;  // (0,1)
      double x;
      if (std::isinf(lo_) && std::isinf(hi_)) {
        x = std::tan(std::numbers::pi * (t - 0.5));
      } else if (std::isinf(hi_)) {
        x = lo_ + t / (1.0 - t);
      } else if (std::isinf(lo_)) {
        x = hi_ - (1.0 - t) / t;
      } else {
        x = lo_ + t * (hi_ - lo_);
      }
      xs.push_back(x);
    }
    return xs;
  }

 private:
  Kind kind_ = Kind::atoms;
  std::vector<std::pair<double, double>> atoms_;
  RealFunction rho_;
  double lo_ = 0.0, hi_ = 0.0;
  std::vector<double> breaks_;
  QuadratureOptions quad_;
};

/// Integral ∫ g dμ with its error estimate (zero for atoms).
inline QuadratureResult integrate_against(const MeasureSpec& mu, const RealFunction& g,
                                          const std::vector<double>& extra_breaks = {}) {
  if (mu.kind() == MeasureSpec::Kind::atoms) {
    QuadratureResult r;
    for (const auto& [x, w] : mu.atom_list()) r.value += w * g(x);
    return r;
  }
  std::vector<double> breaks = mu.breakpoints();
  breaks.insert(breaks.end(), extra_breaks.begin(), extra_breaks.end());
  const auto& rho = mu.rho();
  return integrate([&](double x) { return g(x) * rho(x); }, mu.lo(), mu.hi(), mu.quadrature(), breaks);
}

/// Nonnegative bounded densities η, ξ with respect to μ.
struct DensityPair {
  RealFunction eta;
  RealFunction xi;
  std::vector<double> breakpoints;  ///< kinks/jumps of η or ξ
  double sup_bound = 0.0;           ///< max(η, ξ) over the sampled points

  /// Samples both functions on μ's support; rejects negative or non-finite values.
  void validate(const MeasureSpec& mu) {
    sup_bound = 0.0;
    auto pts = mu.sample_points();
    pts.insert(pts.end(), breakpoints.begin(), breakpoints.end());
    for (double x : pts) {
      const double e = eta(x), k = xi(x);
      if (!std::isfinite(e) || !std::isfinite(k) || e < 0.0 || k < 0.0) {
        throw ValidationError("DensityPair: eta/xi must be finite and nonnegative (x=" + std::to_string(x) + ")");
      }
      sup_bound = std::max({sup_bound, e, k});
    }
  }
};

struct BhattacharyyaResult {
  double value = 0.0;     ///< (∫√(ηξ) dμ)²
  double integral = 0.0;  ///< ∫√(ηξ) dμ
  double error = 0.0;     ///< error estimate of `value`
};

inline BhattacharyyaResult bhattacharyya(const MeasureSpec& mu, DensityPair p) {
  p.validate(mu);
  const auto q = integrate_against(mu, [&](double x) { return std::sqrt(p.eta(x) * p.xi(x)); }, p.breakpoints);
  BhattacharyyaResult out;
  out.integral = q.value;
  out.value = q.value * q.value;
  out.error = 2.0 * std::abs(q.value) * q.error + q.error * q.error;
  return out;
}

struct MomentsResult {
  std::vector<double> values;  ///< s_0 … s_{n_max}
  std::vector<double> errors;
};

/// s_n = ∫ xⁿ dμ for n = 0 … n_max.
inline MomentsResult measure_moments(const MeasureSpec& mu, int n_max) {
  if (n_max < 0) throw ValidationError("measure_moments: n_max must be >= 0");
  MomentsResult out;
  for (int n = 0; n <= n_max; ++n) {
    QuadratureResult q;
    try {
      q = integrate_against(mu, [n](double x) { return std::pow(x, n); });
    } catch (const NumericalError& e) {
      auto diag = e.diagnostics();
      diag["n"] = n;
      throw NumericalError(e.kind(), "measure_moments: s_" + std::to_string(n) + ": " + e.what(), diag);
    }
    out.values.push_back(q.value);
    out.errors.push_back(q.error);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Built-in measures and densities

inline MeasureSpec lebesgue_measure(double a, double b, double scale = 1.0) {
  if (!(scale > 0.0)) throw ValidationError("lebesgue: scale must be positive");
  return MeasureSpec::density([scale](double) { return scale; }, a, b);
}

inline MeasureSpec gaussian_measure(double mean = 0.0, double sigma = 1.0) {
  if (!(sigma > 0.0)) throw ValidationError("gaussian: sigma must be positive");
  const double c = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  return MeasureSpec::density(
      [=](double x) {
        const double z = (x - mean) / sigma;
        return c * std::exp(-0.5 * z * z);
      },
      -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), {mean});
}

inline MeasureSpec lognormal_measure(double mu = 0.0, double sigma = 1.0) {
  if (!(sigma > 0.0)) throw ValidationError("lognormal: sigma must be positive");
  const double c = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  return MeasureSpec::density(
      [=](double x) {
        if (x <= 0.0) return 0.0;
        const double z = (std::log(x) - mu) / sigma;
        return c * std::exp(-0.5 * z * z) / x;
      },
      0.0, std::numeric_limits<double>::infinity(), {std::exp(mu)});
}

/// Unnormalized bump density exp(−1/((x−a)(b−x))) on (a, b).
inline MeasureSpec bump_measure(double a, double b) {
  if (!(a < b)) throw ValidationError("bump: need a < b");
  return MeasureSpec::density(
      [=](double x) { return (x <= a || x >= b) ? 0.0 : std::exp(-1.0 / ((x - a) * (b - x))); }, a, b);
}

// ---------------------------------------------------------------------------
// Stieltjes class over the log-normal

struct StieltjesDemo {
  double moment_diff = 0.0;  ///< max_n |s_n(μ1) − s_n(μ2)| / (1 + |s_n|)
  double j = 0.0;            ///< (∫ √(ηξ) dν)²
  double j_error = 0.0;
  double p_claim = 1.0;      ///< P of the induced functionals on ℂ[x]
  double eta_plus_xi_max_dev = 0.0;
  std::vector<double> moments_plus;
  std::vector<double> moments_minus;
  std::vector<double> moment_errors;
};

/// ν = log-normal(0,1), η,ξ = 1 ± sin(2π ln x). Moments up to 2d; after
/// x = e^u the n-th moment is e^{n²/2}∫ φ(v)(1 ± sin(2π(v+n))) dv with φ the
/// standard normal density.
inline StieltjesDemo stieltjes_demo(int d, const QuadratureOptions& quad = {}) {
  if (d < 0 || d > 10) throw ValidationError("stieltjes_demo: d must be in 0..10");
  const double two_pi = 2.0 * std::numbers::pi;
  const double norm = 1.0 / std::sqrt(two_pi);
  const double inf = std::numeric_limits<double>::infinity();
  auto phi = [norm](double v) { return norm * std::exp(-0.5 * v * v); };
  StieltjesDemo out;
  for (int n = 0; n <= 2 * d; ++n) {
    const double shift = n;
    const auto plus = integrate([&](double v) { return phi(v) * (1.0 + std::sin(two_pi * (v + shift))); }, -inf,
                                inf, quad, {0.0});
    const auto minus = integrate([&](double v) { return phi(v) * (1.0 - std::sin(two_pi * (v + shift))); }, -inf,
                                 inf, quad, {0.0});
    const double scale = std::exp(0.5 * shift * shift);
    const double sp = scale * plus.value, sm = scale * minus.value;
    out.moments_plus.push_back(sp);
    out.moments_minus.push_back(sm);
    out.moment_errors.push_back(scale * std::max(plus.error, minus.error));
    out.moment_diff = std::max(out.moment_diff, std::abs(sp - sm) / (1.0 + std::abs(0.5 * (sp + sm))));
  }

  // √(ηξ) = |cos(2π ln x)|; in u = ln x the kinks sit at u = (2j+1)/4.
  std::vector<double> kinks;
  const double cut = 12.0;
  for (int j = -25; j <= 24; ++j) {
    const double u = (2.0 * j + 1.0) / 4.0;
    if (u > -cut && u < cut) kinks.push_back(u);
  }
  const auto q = integrate([&](double u) { return phi(u) * std::abs(std::cos(two_pi * u)); }, -cut, cut, quad,
                           kinks);
  const double tail = 2.0 * 0.5 * std::erfc(cut / std::sqrt(2.0));
  out.j = q.value * q.value;
  out.j_error = 2.0 * q.value * (q.error + tail);

  for (int i = 0; i < 200; ++i) {
    const double x = std::exp(-8.0 + 16.0 * i / 199.0);
    const double s = std::sin(two_pi * std::log(x));
    out.eta_plus_xi_max_dev = std::max(out.eta_plus_xi_max_dev, std::abs((1.0 + s) + (1.0 - s) - 2.0));
  }
  return out;
}

}  // namespace transit
