#include <gtest/gtest.h>

#include <numbers>

#include "transit/commutative_measure.hpp"
#include "transit/random.hpp"
#include "transit/transition.hpp"

using namespace transit;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DensityPair pair_of(RealFunction eta, RealFunction xi, std::vector<double> breaks = {}) {
  DensityPair p;
  p.eta = std::move(eta);
  p.xi = std::move(xi);
  p.breakpoints = std::move(breaks);
  return p;
}

struct PiecewiseConstant {
  std::vector<double> cuts;    // interior cut points of [0, 1]
  std::vector<double> values;  // cuts.size() + 1 values
  double operator()(double x) const {
    const auto k = static_cast<std::size_t>(std::upper_bound(cuts.begin(), cuts.end(), x) - cuts.begin());
    return values[k];
  }
};

PiecewiseConstant random_piecewise(Rng& rng, const std::vector<double>& cuts) {
  PiecewiseConstant f{cuts, {}};
  for (std::size_t i = 0; i <= cuts.size(); ++i) f.values.push_back(rng.uniform() < 0.2 ? 0.0 : rng.uniform(0.0, 3.0));
  return f;
}

}  // namespace

TEST(Quadrature, KnownIntegrals) {
  EXPECT_NEAR(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value, 2.0, 1e-12);
  EXPECT_NEAR(integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0).value, 2.0 / 3.0, 1e-9);
  EXPECT_NEAR(integrate([](double x) { return std::exp(-x * x); }, -kInf, kInf).value, std::sqrt(std::numbers::pi), 1e-9);
  EXPECT_NEAR(integrate([](double x) { return std::exp(-x); }, 0.0, kInf).value, 1.0, 1e-9);
  EXPECT_NEAR(integrate([](double x) { return std::exp(x); }, -kInf, 0.0).value, 1.0, 1e-9);
  EXPECT_NEAR(integrate([](double x) { return x; }, 1.0, 0.0).value, -0.5, 1e-14);
}

TEST(Quadrature, BreakpointsAtJumps) {
  auto step = [](double x) { return x < 0.3 ? 1.0 : 4.0; };
  const auto r = integrate(step, 0.0, 1.0, {}, {0.3});
  EXPECT_NEAR(r.value, 0.3 + 2.8, 1e-12);
  EXPECT_EQ(r.subdivisions, 0);
}

TEST(Quadrature, BudgetExhaustionIsNumericalError) {
  QuadratureOptions o;
  o.max_subdivisions = 3;
  o.abs_tol = 1e-15;
  o.rel_tol = 1e-15;
  try {
    integrate([](double x) { return std::sin(1.0 / x); }, 1e-6, 1.0, o);
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_EQ(e.kind(), "quadrature");
    EXPECT_GT(e.diagnostics().at("error_estimate"), 0.0);
  }
}

TEST(Bhattacharyya, EqualDensities) {
  const auto mu = gaussian_measure();
  const auto r = bhattacharyya(mu, pair_of([](double) { return 1.0; }, [](double) { return 1.0; }));
  EXPECT_NEAR(r.value, 1.0, 1e-8);
}

TEST(Bhattacharyya, DisjointSupports) {
  const auto mu = lebesgue_measure(0.0, 1.0);
  const auto r = bhattacharyya(mu, pair_of([](double x) { return x < 0.5 ? 1.0 : 0.0; },
                                          [](double x) { return x < 0.5 ? 0.0 : 1.0; }, {0.5}));
  EXPECT_NEAR(r.value, 0.0, 1e-20);
}

TEST(Bhattacharyya, LinearPairOnUnitInterval) {
  const auto mu = lebesgue_measure(0.0, 1.0);
  const auto r = bhattacharyya(mu, pair_of([](double x) { return 2.0 * x; }, [](double x) { return 2.0 * (1.0 - x); }));
  const double want = std::pow(std::numbers::pi / 4.0, 2);
  EXPECT_NEAR(r.value, want, 1e-8);
  EXPECT_LE(std::abs(r.value - want), r.error + 1e-12);
}

TEST(Bhattacharyya, RejectsNegativeDensity) {
  const auto mu = lebesgue_measure(0.0, 1.0);
  EXPECT_THROW(bhattacharyya(mu, pair_of([](double x) { return x - 0.5; }, [](double) { return 1.0; })),
               ValidationError);
}

TEST(Bhattacharyya, CauchySchwarzOnPiecewiseConstant) {
  Rng rng(71);
  const std::vector<double> cuts{0.1, 0.25, 0.5, 0.6, 0.9};
  const auto mu = lebesgue_measure(0.0, 1.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto eta = random_piecewise(rng, cuts), xi = random_piecewise(rng, cuts);
    const double b = bhattacharyya(mu, pair_of(eta, xi, cuts)).value;
    const double ie = integrate_against(mu, eta, cuts).value;
    const double ix = integrate_against(mu, xi, cuts).value;
    EXPECT_LE(b, ie * ix + 1e-10);
    // exact value from the pieces
    double exact = 0.0;
    std::vector<double> edges{0.0};
    edges.insert(edges.end(), cuts.begin(), cuts.end());
    edges.push_back(1.0);
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
      exact += 2.0 * (edges[k + 1] - edges[k]) * std::sqrt(eta.values[k] * xi.values[k]);
    }
    EXPECT_NEAR(b, exact * exact, 1e-10);
  }
}

TEST(Bhattacharyya, AtomsMatchDiagonalFidelity) {
  Rng rng(72);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::pair<double, double>> atoms;
    std::vector<double> e, x;
    RealVector p(5), q(5);
    for (int i = 0; i < 5; ++i) {
      const double w = rng.uniform(0.1, 1.0);
      atoms.emplace_back(static_cast<double>(i), w);
      e.push_back(rng.uniform(0.0, 2.0));
      x.push_back(rng.uniform(0.0, 2.0));
      p(i) = w * e.back();
      q(i) = w * x.back();
    }
    const auto mu = MeasureSpec::atoms(atoms);
    auto at = [](std::vector<double> v) { return [v](double t) { return v[static_cast<std::size_t>(std::lround(t))]; }; };
    const double b = bhattacharyya(mu, pair_of(at(e), at(x))).value;
    EXPECT_NEAR(b, fidelity(HermitianMatrix::diagonal(p), HermitianMatrix::diagonal(q)), 1e-10);
  }
}

TEST(Moments, Atom) {
  const double c = 1.3;
  const auto m = measure_moments(MeasureSpec::atoms({{c, 1.0}}), 8);
  for (int n = 0; n <= 8; ++n) EXPECT_NEAR(m.values[static_cast<std::size_t>(n)], std::pow(c, n), 1e-12);
}

TEST(Moments, StandardNormal) {
  const auto m = measure_moments(gaussian_measure(), 16);
  double dfact = 1.0;
  for (int n = 0; n <= 16; ++n) {
    const double v = m.values[static_cast<std::size_t>(n)];
    if (n % 2 == 1) {
      EXPECT_NEAR(v, 0.0, 1e-8);
    } else {
      if (n > 0) dfact *= n - 1;
      EXPECT_NEAR(v, dfact, 1e-8 * std::max(1.0, dfact));
    }
  }
}

TEST(Moments, Lebesgue) {
  const auto m = measure_moments(lebesgue_measure(0.0, 1.0), 12);
  for (int n = 0; n <= 12; ++n) EXPECT_NEAR(m.values[static_cast<std::size_t>(n)], 1.0 / (n + 1), 1e-12);
}

TEST(Moments, LognormalClosedForm) {
  const auto m = measure_moments(lognormal_measure(), 4);
  for (int n = 0; n <= 4; ++n) EXPECT_NEAR(m.values[static_cast<std::size_t>(n)], std::exp(0.5 * n * n), 1e-7 * std::exp(0.5 * n * n));
}

TEST(MeasureSpec, Validation) {
  EXPECT_THROW(MeasureSpec::atoms({}), ValidationError);
  EXPECT_THROW(MeasureSpec::atoms({{0.0, -1.0}}), ValidationError);
  EXPECT_THROW(MeasureSpec::density([](double x) { return x; }, -1.0, 1.0), ValidationError);
  EXPECT_THROW(lebesgue_measure(1.0, 0.0), ValidationError);
  EXPECT_THROW(gaussian_measure(0.0, 0.0), ValidationError);
}

TEST(Stieltjes, MomentsAgreeButJDoesNot) {
  const auto demo = stieltjes_demo(10);
  EXPECT_LE(demo.moment_diff, 1e-6);
  EXPECT_EQ(demo.moments_plus.size(), 21u);
  EXPECT_EQ(demo.p_claim, 1.0);
  EXPECT_GE(1.0 - demo.j, 0.01);
  EXPECT_LE(demo.eta_plus_xi_max_dev, 1e-15);
  // E|cos 2πV| for V standard normal, from the Fourier series of |cos|:
  // 2/π + (4/π) Σ (−1)^{k+1} e^{−8π²k²}/(4k²−1); the k ≥ 1 terms are < 1e-34
  const double series = 2.0 / std::numbers::pi + 4.0 / std::numbers::pi * std::exp(-8.0 * std::numbers::pi * std::numbers::pi) / 3.0;
  EXPECT_NEAR(demo.j, series * series, 1e-9);
}

TEST(Stieltjes, MomentsMatchClosedForm) {
  // s_n of the log-normal is e^{n²/2}; the sin perturbation integrates to zero
  const auto demo = stieltjes_demo(5);
  for (std::size_t n = 0; n < demo.moments_plus.size(); ++n) {
    const double s = std::exp(0.5 * static_cast<double>(n * n));
    EXPECT_NEAR(demo.moments_plus[n], s, 1e-8 * s);
    EXPECT_NEAR(demo.moments_minus[n], s, 1e-8 * s);
  }
}
