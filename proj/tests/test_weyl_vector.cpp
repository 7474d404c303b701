#include <gtest/gtest.h>

#include <numbers>

#include "transit/random.hpp"
#include "transit/weyl_vector.hpp"

using namespace transit;

namespace {

SmoothBumpFunction normalized(const SmoothBumpFunction& f) { return f.scaled(1.0 / l2_norm(f)); }

// composite Simpson on a fine uniform grid
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST(CanonicalBump, Values) {
  const auto f = canonical_bump(0.0, 1.0);
  EXPECT_NEAR(f(0.5).real(), std::exp(-4.0), 1e-16);
  EXPECT_EQ(f(0.0), std::complex<double>(0.0));
  EXPECT_EQ(f(1.0), std::complex<double>(0.0));
  EXPECT_EQ(f(-0.5), std::complex<double>(0.0));
  EXPECT_THROW(canonical_bump(1.0, 1.0), ValidationError);
}

TEST(CanonicalBump, FlatAtEndpoints) {
  const auto f = canonical_bump(0.0, 1.0);
  for (double h : {1e-2, 1e-3}) {
    EXPECT_LE(std::abs((f(h) - f(0.0)).real() / h), 1e-8);
    EXPECT_LE(std::abs((f(1.0) - f(1.0 - h)).real() / h), 1e-8);
    EXPECT_LE(std::abs((f(h) - f(-h)).real() / (2 * h)), 1e-8);
  }
}

TEST(Intersections, Examples) {
  EXPECT_TRUE(component_intersections(IntervalSet({{0, 1}}), IntervalSet({{2, 3}})).empty());
  const auto one = component_intersections(IntervalSet({{0, 2}}), IntervalSet({{1, 3}}));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].k, 0u);
  EXPECT_EQ(one[0].l, 0u);
  EXPECT_EQ(one[0].interval, Interval(1, 2));
  const auto two = component_intersections(IntervalSet({{0, 1}, {2, 4}}), IntervalSet({{0.5, 3}}));
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0].k, 0u);
  EXPECT_EQ(two[0].interval, Interval(0.5, 1));
  EXPECT_EQ(two[1].k, 1u);
  EXPECT_EQ(two[1].l, 0u);
  EXPECT_EQ(two[1].interval, Interval(2, 3));
}

TEST(Intersections, MatchesBruteForce) {
  Rng rng(81);
  auto random_set = [&](int n) {
    std::vector<double> pts;
    for (int i = 0; i < 2 * n; ++i) pts.push_back(rng.uniform(0.0, 10.0));
    std::sort(pts.begin(), pts.end());
    std::vector<Interval> iv;
    for (int i = 0; i < n; ++i) iv.emplace_back(pts[2 * i], pts[2 * i + 1]);
    return IntervalSet(iv);
  };
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_set(1 + trial % 4), b = random_set(1 + trial % 3);
    std::vector<std::tuple<std::size_t, std::size_t, double, double>> want;
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) {
        const double lo = std::max(a[i].first, b[j].first), hi = std::min(a[i].second, b[j].second);
        if (lo < hi) want.emplace_back(i, j, lo, hi);
      }
    std::sort(want.begin(), want.end(), [](const auto& x, const auto& y) { return std::get<2>(x) < std::get<2>(y); });
    const auto got = component_intersections(a, b);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t n = 0; n < got.size(); ++n) {
      EXPECT_EQ(got[n].k, std::get<0>(want[n]));
      EXPECT_EQ(got[n].l, std::get<1>(want[n]));
      EXPECT_EQ(got[n].interval.first, std::get<2>(want[n]));
      EXPECT_EQ(got[n].interval.second, std::get<3>(want[n]));
      if (n > 0) {
        EXPECT_LE(got[n - 1].interval.second, got[n].interval.first);
      }
    }
  }
}

TEST(IntervalSet, Validation) {
  EXPECT_THROW(IntervalSet({{1, 0}}), ValidationError);
  EXPECT_THROW(IntervalSet({{0, 2}, {1, 3}}), ValidationError);
  EXPECT_THROW(IntervalSet({{2, 3}, {0, 1}}), ValidationError);
  EXPECT_NO_THROW(IntervalSet({{0, 1}, {1, 2}}));
}

TEST(Weyl, SingleIntervalIsInnerProduct) {
  const auto phi = normalized(canonical_bump(0.0, 1.0));
  const auto psi = normalized(canonical_bump(0.4, 1.7));
  const auto r = weyl_transition(phi, psi);
  EXPECT_NEAR(r.probability, std::norm(l2_inner(phi, psi).value), 1e-7);
  EXPECT_TRUE(r.trust_assumptions.empty());
  EXPECT_GT(r.probability, 1e-3);
}

TEST(Weyl, SignFlipGivesNormToTheFourth) {
  const auto phi = normalized(bump_sum({{0, 1}, {2, 3}}, {1.0, 1.0}));
  const auto psi = bump_sum({{0, 1}, {2, 3}}, {1.0, -1.0}).scaled(1.0 / l2_norm(bump_sum({{0, 1}, {2, 3}}, {1.0, -1.0})));
  const auto r = weyl_transition(phi, psi);
  EXPECT_NEAR(r.probability, std::pow(l2_norm(phi), 4), 1e-7);
  EXPECT_LE(std::norm(l2_inner(phi, psi).value), 1e-12);
  EXPECT_EQ(r.terms.size(), 2u);
}

TEST(Weyl, UnimodularComplexCoefficients) {
  const std::complex<double> w = std::polar(1.0, 0.7), v = std::polar(1.0, -2.1);
  const auto phi = bump_sum({{0, 1}, {1.5, 2}, {3, 5}}, {1.0, 1.0, 1.0});
  const auto psi = bump_sum({{0, 1}, {1.5, 2}, {3, 5}}, {w, v, 1.0});
  EXPECT_NEAR(weyl_transition(phi, psi).probability, std::pow(l2_norm(phi), 4), 1e-9 * std::pow(l2_norm(phi), 4));
}

TEST(Weyl, DisjointSupports) {
  const auto r = weyl_transition(canonical_bump(0, 1), canonical_bump(2, 3));
  EXPECT_EQ(r.probability, 0.0);
  EXPECT_TRUE(r.terms.empty());
}

TEST(Weyl, DominatesInnerProductOnRandomPairs) {
  Rng rng(82);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Interval> a{{0, 1 + rng.uniform()}, {2.5, 3 + rng.uniform()}}, b{{rng.uniform(), 2.8}, {3.2, 5}};
    const auto phi = bump_sum(a, {std::polar(1.0, rng.uniform(0, 6.3)), rng.uniform(0.5, 2.0)});
    const auto psi = bump_sum(b, {rng.uniform(0.5, 2.0), std::polar(1.0, rng.uniform(0, 6.3))});
    const auto r = weyl_transition(phi, psi);
    const auto inner = l2_inner(phi, psi);
    EXPECT_GE(r.probability + r.error + 1e-20, std::norm(inner.value) - inner.error);
  }
}

TEST(Weyl, SelfTransitionIsNormToTheFourth) {
  const auto phi = bump_sum({{0, 1}, {2, 3.5}}, {2.0, std::complex<double>(0, -1)});
  EXPECT_NEAR(weyl_transition(phi, phi).probability, std::pow(l2_norm(phi), 4), 1e-10 * std::pow(l2_norm(phi), 4));
}

TEST(Weyl, ScalingCovariance) {
  const auto phi = bump_sum({{0, 1}, {2, 3}}, {1.0, 0.5});
  const auto psi = bump_sum({{0.5, 2.5}}, {1.0});
  const std::complex<double> c(1.5, -2.0);
  const double base = weyl_transition(phi, psi).probability;
  EXPECT_NEAR(weyl_transition(phi.scaled(c), psi).probability, std::norm(c) * base, 1e-9 * std::norm(c) * base);
}

TEST(Weyl, ThreadCountDoesNotChangeResult) {
  const auto phi = bump_sum({{0, 1}, {2, 3}, {4, 5}, {6, 7}}, {1.0, -1.0, 0.5, 2.0});
  const auto psi = bump_sum({{0.5, 6.5}}, {1.0});
  WeylOptions one, four;
  one.threads = 1;
  four.threads = 4;
  EXPECT_EQ(weyl_transition(phi, psi, one).probability, weyl_transition(phi, psi, four).probability);
}

TEST(L2, NormAndInner) {
  const auto phi = canonical_bump(0.0, 1.0);
  EXPECT_NEAR(l2_inner(phi, phi).value.real(), std::pow(l2_norm(phi), 2), 1e-10);
  const double oracle = std::sqrt(simpson([](double x) { return std::pow(bump_value(0.0, 1.0, x), 2); }, 0.0, 1.0, 200000));
  EXPECT_NEAR(l2_norm(phi), oracle, 1e-8 * oracle);
  const auto a = bump_sum({{0, 1}, {2, 3}}, {1.0, 1.0}), b = bump_sum({{0, 1}, {2, 3}}, {1.0, -1.0});
  EXPECT_LE(std::abs(l2_inner(a, b).value), 1e-9);
}

TEST(Tabulated, ProfileIsAcceptedWithTrustAssumption) {
  BumpComponent c;
  c.profile = BumpComponent::Profile::tabulated;
  for (int i = 0; i <= 40; ++i) {
    const double x = i / 40.0;
    c.grid.push_back(x);
    c.values.push_back(std::sin(std::numbers::pi * x) * std::sin(std::numbers::pi * x));
  }
  c.values.front() = c.values.back() = 0.0;
  const SmoothBumpFunction f(IntervalSet({{0.0, 1.0}}), {c});
  const auto r = weyl_transition(f, canonical_bump(0.0, 1.0));
  EXPECT_FALSE(r.trust_assumptions.empty());
  EXPECT_NEAR(r.probability, std::norm(l2_inner(f, canonical_bump(0.0, 1.0)).value), 1e-9);
}

TEST(Tabulated, AbuttingSplitIsRejected) {
  // a nonvanishing profile on (0, 2) cut at 1 into two declared intervals
  auto piece = [](double a, double b) {
    BumpComponent c;
    c.profile = BumpComponent::Profile::tabulated;
    for (int i = 0; i <= 10; ++i) {
      const double x = a + (b - a) * i / 10.0;
      c.grid.push_back(x);
      c.values.push_back(x * (2.0 - x));
    }
    return c;
  };
  EXPECT_THROW(SmoothBumpFunction(IntervalSet({{0.0, 1.0}, {1.0, 2.0}}), {piece(0.0, 1.0), piece(1.0, 2.0)}),
               ValidationError);
}

TEST(Tabulated, RejectsInteriorZeroAndSignChange) {
  BumpComponent c;
  c.profile = BumpComponent::Profile::tabulated;
  c.grid = {0.0, 0.25, 0.5, 0.75, 1.0};
  c.values = {0.0, 1.0, 0.0, 1.0, 0.0};
  EXPECT_THROW(SmoothBumpFunction(IntervalSet({{0.0, 1.0}}), {c}), ValidationError);
  c.values = {0.0, 1.0, 0.5, -1.0, 0.0};
  EXPECT_THROW(SmoothBumpFunction(IntervalSet({{0.0, 1.0}}), {c}), ValidationError);
  c.values = {0.0, 1.0, 0.5, 1.0, 0.0};
  c.grid = {0.0, 0.25, 0.5, 0.75, 0.9};
  EXPECT_THROW(SmoothBumpFunction(IntervalSet({{0.0, 1.0}}), {c}), ValidationError);
}
