#pragma once

// Globally adaptive 15-point Gauss–Kronrod quadrature with an interval
// priority queue, in the manner of QUADPACK's QAG/QAGI.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "transit/errors.hpp"

namespace transit {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 2000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  ///< achieved error estimate
  int subdivisions = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kGkNodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error, l1;
  bool operator<(const Panel& o) const { return error < o.error; }
};

/// One GK15 panel with the QUADPACK error heuristic.
template <class F>
Panel gk15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resg = fc * kGaussWeights[3];
  double resk = fc * kKronrodWeights[7];
  double resabs = std::abs(resk);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kGkNodes[static_cast<std::size_t>(j)];
    f1[static_cast<std::size_t>(j)] = f(center - dx);
    f2[static_cast<std::size_t>(j)] = f(center + dx);
    const double sum = f1[static_cast<std::size_t>(j)] + f2[static_cast<std::size_t>(j)];
    resk += kKronrodWeights[static_cast<std::size_t>(j)] * sum;
    resabs += kKronrodWeights[static_cast<std::size_t>(j)] *
              (std::abs(f1[static_cast<std::size_t>(j)]) + std::abs(f2[static_cast<std::size_t>(j)]));
    if (j % 2 == 1) resg += kGaussWeights[static_cast<std::size_t>(j / 2)] * sum;
  }
  const double reskh = 0.5 * resk;
  double resasc = kKronrodWeights[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += kKronrodWeights[static_cast<std::size_t>(j)] *
              (std::abs(f1[static_cast<std::size_t>(j)] - reskh) + std::abs(f2[static_cast<std::size_t>(j)] - reskh));
  }
  const double value = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  return {a, b, value, err, resabs};
}

template <class F>
QuadratureResult adaptive(F& f, const std::vector<double>& cuts, const QuadratureOptions& opts) {
  std::priority_queue<Panel> queue;
  double total = 0.0, error = 0.0, l1 = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i] < cuts[i + 1])) continue;
    const Panel p = gk15(f, cuts[i], cuts[i + 1]);
    total += p.value;
    error += p.error;
    l1 += p.l1;
    queue.push(p);
  }
  // Cancellation floor: nothing below ~eps·∫|f| is attainable in double.
  constexpr double floor_factor = 1e3 * std::numeric_limits<double>::epsilon();
  int subdivisions = 0;
  while (error > std::max({opts.abs_tol, opts.rel_tol * std::abs(total), floor_factor * l1})) {
    if (!std::isfinite(total) || !std::isfinite(error)) {
      throw NumericalError("quadrature", "integrate: integrand produced non-finite values",
                           {{"error_estimate", error}, {"value", total}});
    }
    if (subdivisions >= opts.max_subdivisions || queue.empty()) {
      throw NumericalError("quadrature", "integrate: subdivision budget exhausted",
                           {{"error_estimate", error}, {"value", total},
                            {"subdivisions", static_cast<double>(subdivisions)}});
    }
    const Panel worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      throw NumericalError("quadrature", "integrate: interval too small to bisect",
                           {{"error_estimate", error}, {"value", total}});
    }
    queue.pop();
    const Panel left = gk15(f, worst.a, mid);
    const Panel right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    queue.push(left);
    queue.push(right);
    ++subdivisions;
  }
  // recompute sums to remove drift from the incremental updates
  double value = 0.0, err = 0.0;
  while (!queue.empty()) {
    value += queue.top().value;
    err += queue.top().error;
    queue.pop();
  }
  return {value, err, subdivisions};
}

}  // namespace detail

/// ∫_a^b f(x) dx. Either endpoint may be infinite; `breakpoints` inside
/// (a, b) start the partition (use them at kinks and discontinuities).
template <class F>
QuadratureResult integrate(F f, double a, double b, const QuadratureOptions& opts = {},
                           std::vector<double> breakpoints = {}) {
  if (std::isnan(a) || std::isnan(b)) throw ValidationError("integrate: NaN endpoint");
  if (a == b) return {};
  if (a > b) {
    auto r = integrate(f, b, a, opts, std::move(breakpoints));
    r.value = -r.value;
    return r;
  }
  std::sort(breakpoints.begin(), breakpoints.end());
  const bool lo_inf = std::isinf(a), hi_inf = std::isinf(b);
  if (!lo_inf && !hi_inf) {
    std::vector<double> cuts{a};
    for (double c : breakpoints)
      if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    return detail::adaptive(f, cuts, opts);
  }
  // Map to a finite t-interval; breakpoints are carried through the inverse map.
  if (lo_inf && hi_inf) {
    auto g = [&f](double t) {
      const double d = 1.0 - t * t;
      if (d <= 0.0) return 0.0;
      const double x = t / d;
      return f(x) * (1.0 + t * t) / (d * d);
    };
    std::vector<double> cuts{-1.0};
    for (double c : breakpoints) {
      const double t = c == 0.0 ? 0.0 : (std::sqrt(1.0 + 4.0 * c * c) - 1.0) / (2.0 * c);
      cuts.push_back(t);
    }
    cuts.push_back(1.0);
    return detail::adaptive(g, cuts, opts);
  }
  const double base = lo_inf ? b : a;
  const double sign = lo_inf ? -1.0 : 1.0;
  auto g = [&f, base, sign](double t) {
    const double d = 1.0 - t;
    if (d <= 0.0) return 0.0;
    const double x = base + sign * t / d;
    return f(x) / (d * d);
  };
  std::vector<double> cuts{0.0};
  for (double c : breakpoints) {
    const double u = sign * (c - base);
    if (u > 0.0) cuts.push_back(u / (1.0 + u));
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(1.0);
  return detail::adaptive(g, cuts, opts);
}

}  // namespace transit
