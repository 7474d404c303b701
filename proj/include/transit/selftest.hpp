#pragma once

// Cross-route validation suite. Each criterion draws its instances from
// Rng::stream(seed, ·), so the quick level runs a prefix of the full one.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "transit/commutative_measure.hpp"
#include "transit/instances.hpp"
#include "transit/transition.hpp"
#include "transit/weyl_vector.hpp"

namespace transit {

struct CriterionReport {
  int id = 0;
  std::string name;
  bool pass = false;
  double observed = 0.0;   ///< worst value of the primary statistic
  double tolerance = 0.0;  ///< bound the statistic is held to
  int instances = 0;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::string detail;

  std::string line() const {
    char buf[512];
    std::snprintf(buf, sizeof buf, "[%s] %2d %-28s observed %.3e  tol %.1e  n=%-4d %.2fs (budget %.0fs)%s%s",
                  pass ? "PASS" : "FAIL", id, name.c_str(), observed, tolerance, instances, seconds, budget_seconds,
                  detail.empty() ? "" : "  ", detail.c_str());
    return buf;
  }
};

enum class SelftestLevel { quick, full };

struct SelftestOptions {
  SelftestLevel level = SelftestLevel::full;
  std::uint64_t seed = 0;
  /// Debug fault forwarded to every transition computation.
  bool transpose_blocks = false;
  double block_tol = 1e-8;
  /// Pinned J of the log-normal Stieltjes example.
  double stieltjes_j_reference = 0.405284734569351;
};

namespace selftest_detail {

/// Instance counts per criterion: {quick, full}.
inline int count(const SelftestOptions& o, int quick, int full) {
  return o.level == SelftestLevel::quick ? quick : full;
}

inline CriterionReport report(int id, std::string name) {
  CriterionReport r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

inline std::uint64_t stream_id(int criterion, int instance) {
  return static_cast<std::uint64_t>(criterion) * 1000003ULL + static_cast<std::uint64_t>(instance);
}

struct PairInstance {
  Representation rep;
  Vector phi;
  Vector psi;
  double p = 0.0;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

/// Orthonormal polynomials of a moment functional by modified Gram–Schmidt
/// on 1, x, …, x^d in long double; returns (a_0…a_{d-1}, b_1…b_{d-1}).
inline std::pair<std::vector<double>, std::vector<double>> gram_schmidt_recurrence(const std::vector<long double>& s,
                                                                                   int d) {
  using Poly = std::vector<long double>;
  auto inner = [&](const Poly& p, const Poly& q) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = 0; j < q.size(); ++j) acc += p[i] * q[j] * s[i + j];
    return acc;
  };
  auto shift = [](const Poly& p) {
    Poly out(p.size() + 1, 0.0L);
    for (std::size_t i = 0; i < p.size(); ++i) out[i + 1] = p[i];
    return out;
  };
  std::vector<Poly> basis;
  for (int k = 0; k < d; ++k) {
    Poly p(static_cast<std::size_t>(k) + 1, 0.0L);
    p.back() = 1.0L;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) {
        const long double c = inner(p, q);
        for (std::size_t i = 0; i < q.size(); ++i) p[i] -= c * q[i];
      }
    }
    const long double nrm = std::sqrt(inner(p, p));
    for (auto& v : p) v /= nrm;
    basis.push_back(std::move(p));
  }
  std::vector<double> a, b;
  for (int k = 0; k < d; ++k) a.push_back(static_cast<double>(inner(shift(basis[static_cast<std::size_t>(k)]), basis[static_cast<std::size_t>(k)])));
  for (int k = 1; k < d; ++k) b.push_back(static_cast<double>(inner(shift(basis[static_cast<std::size_t>(k - 1)]), basis[static_cast<std::size_t>(k)])));
  return {a, b};
}

}  // namespace selftest_detail

class Selftest {
 public:
  explicit Selftest(SelftestOptions opts) : opts_(opts) {
    topts_.seed = opts.seed;
    topts_.wedderburn.block_tol = opts.block_tol;
    topts_.transpose_blocks = opts.transpose_blocks;
  }

  std::vector<CriterionReport> run(const std::function<void(const CriterionReport&)>& on_report = {}) {
    std::vector<CriterionReport> out;
    using Fn = CriterionReport (Selftest::*)();
    const Fn all[] = {&Selftest::pure_state_law,    &Selftest::purification,  &Selftest::sign_flip,
                      &Selftest::weyl_bullets,      &Selftest::stieltjes,     &Selftest::deformation,
                      &Selftest::plant_and_recover, &Selftest::jacobi,        &Selftest::monotonicity,
                      &Selftest::symmetry_and_range};
    for (Fn f : all) {
      CriterionReport r;
      try {
        r = (this->*f)();
      } catch (const std::exception& e) {
        r.id = static_cast<int>(out.size()) + 1;
        r.name = "(aborted)";
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
      }
      if (on_report) on_report(r);
      out.push_back(std::move(r));
    }
    return out;
  }

  CriterionReport pure_state_law() {
    using namespace selftest_detail;
    CriterionReport r = selftest_detail::report(1, "pure-state law");
    r.tolerance = 1e-9;
    r.budget_seconds = 5.0;
    Clock clock;
    const int n_inst = count(opts_, 20, 100);
    for (int i = 0; i < n_inst; ++i) {
      Rng rng = Rng::stream(opts_.seed, stream_id(1, i));
      const Index n = rng.integer(2, 8);
      const Vector phi = random_unit_vector(n, rng);
      const Vector psi = random_unit_vector(n, rng);
      const Representation rep = full_matrix_algebra(n);
      const auto t = transition_probability(rep, phi, psi, topts_);
      r.observed = std::max(r.observed, std::abs(t.probability - std::norm(psi.dot(phi))));
      pairs_.push_back({rep, phi, psi, t.probability});
    }
    r.instances = n_inst;
    r.seconds = clock.seconds();
    r.pass = r.observed <= r.tolerance && r.seconds <= r.budget_seconds;
    return r;
  }

  CriterionReport purification() {
    using namespace selftest_detail;
    CriterionReport r = selftest_detail::report(2, "purification equivalence");
    r.tolerance = 1e-8;
    r.budget_seconds = 60.0;
    Clock clock;
    const int n_inst = count(opts_, 10, 50);
    double oracle_gap = 0.0, commutant_res = 0.0, cert_gap = 0.0;
    for (int i = 0; i < n_inst; ++i) {
      Rng rng = Rng::stream(opts_.seed, stream_id(2, i));
      const Index n = rng.integer(2, 6);
      const HermitianMatrix s = random_density(n, rng);
      const HermitianMatrix t = random_density(n, rng);
      const GnsResult gs = gns_from_density(n, s);
      const GnsResult gt = gns_from_density(n, t);
      const auto tr = transition_probability(gs.rep, gs.cyclic, gt.cyclic, topts_);
      const double f = fidelity(s, t);
      r.observed = std::max(r.observed, std::abs(f - tr.probability));
      commutant_res = std::max(commutant_res, tr.commutant_residual);
      cert_gap = std::max(cert_gap, std::abs(tr.certificate - tr.probability) / std::max(1.0, tr.probability));
      const auto oracle = oracle_max_contraction(gs.rep, gs.cyclic, gt.cyclic);
      oracle_gap = std::max(oracle_gap, std::abs(oracle.value - tr.probability));
      pairs_.push_back({gs.rep, gs.cyclic, gt.cyclic, tr.probability});
    }
    r.instances = n_inst;
    r.seconds = clock.seconds();
    r.detail = "oracle gap " + fmt("%.1e", oracle_gap) + " (tol 1e-5), T-in-commutant " + fmt("%.1e", commutant_res) +
               " (tol 1e-8), certificate " + fmt("%.1e", cert_gap) + " (tol 1e-8)";
    r.pass = r.observed <= r.tolerance && oracle_gap <= 1e-5 && commutant_res <= 1e-8 && cert_gap <= 1e-8 &&
             r.seconds <= r.budget_seconds;
    return r;
  }

  CriterionReport sign_flip() {
    CriterionReport r = selftest_detail::report(3, "sign-flip diagonal algebra");
    r.tolerance = 1e-9;
    r.budget_seconds = 5.0;
    selftest_detail::Clock clock;
    Matrix p = Matrix::Zero(2, 2);
    p(0, 0) = 1.0;
    const Representation rep(2, {{"p", p}});
    Vector phi(2), psi(2);
    phi << 1.0, 1.0;
    psi << 1.0, -1.0;
    phi /= std::sqrt(2.0);
    psi /= std::sqrt(2.0);
    const auto t = transition_probability(rep, phi, psi, topts_);
    r.observed = std::abs(t.probability - 1.0);
    r.instances = 1;
    r.seconds = clock.seconds();
    r.detail = "P " + selftest_detail::fmt("%.12f", t.probability) + ", |<phi,psi>|^2 " +
               selftest_detail::fmt("%.1e", t.inner_product_sq) + " (tol 1e-18)";
    r.pass = r.observed <= r.tolerance && t.inner_product_sq <= 1e-18 && r.seconds <= r.budget_seconds;
    pairs_.push_back({rep, phi, psi, t.probability});
    return r;
  }

  CriterionReport weyl_bullets() {
    CriterionReport r = selftest_detail::report(4, "weyl interval formula");
    r.tolerance = 1e-7;
    r.budget_seconds = 10.0;
    selftest_detail::Clock clock;
    // single interval each: P reduces to |<phi,psi>|^2
    const auto f0 = canonical_bump(0.0, 1.0);
    const auto g0 = canonical_bump(0.4, 1.7);
    const auto f = f0.scaled(1.0 / l2_norm(f0));
    const auto g = g0.scaled(1.0 / l2_norm(g0));
    const auto w1 = weyl_transition(f, g);
    const double single = std::abs(w1.probability - std::norm(l2_inner(f, g).value));
    // two components with a sign flip: P = ‖phi‖⁴ while <phi,psi> = 0
    const auto p0 = bump_sum({{0.0, 1.0}, {2.0, 3.0}}, {1.0, 1.0});
    const auto phi = p0.scaled(1.0 / l2_norm(p0));
    const auto psi = bump_sum({{0.0, 1.0}, {2.0, 3.0}}, {1.0, -1.0}).scaled(1.0 / l2_norm(p0));
    const auto w2 = weyl_transition(phi, psi);
    const double norm4 = std::pow(l2_norm(phi), 4);
    const double flip = std::abs(w2.probability - norm4);
    const double inner_sq = std::norm(l2_inner(phi, psi).value);
    r.observed = std::max(single, flip);
    r.instances = 2;
    r.seconds = clock.seconds();
    r.detail = "single-interval gap " + selftest_detail::fmt("%.1e", single) + ", sign-flip gap " +
               selftest_detail::fmt("%.1e", flip) + ", |<phi,psi>|^2 " + selftest_detail::fmt("%.1e", inner_sq) +
               " (tol 1e-12)";
    r.pass = r.observed <= r.tolerance && inner_sq <= 1e-12 && r.seconds <= r.budget_seconds;
    return r;
  }

  CriterionReport stieltjes() {
    CriterionReport r = selftest_detail::report(5, "stieltjes class");
    r.tolerance = 1e-6;
    r.budget_seconds = 30.0;
    selftest_detail::Clock clock;
    const auto demo = stieltjes_demo(10);
    const double j_gap = std::abs(demo.j - opts_.stieltjes_j_reference);
    r.observed = demo.moment_diff;
    r.instances = 1;
    r.seconds = clock.seconds();
    r.detail = "1-J " + selftest_detail::fmt("%.6f", 1.0 - demo.j) + " (>= 0.01), J gap to pinned " +
               selftest_detail::fmt("%.1e", j_gap) + " (tol 1e-6)";
    r.pass = demo.moment_diff <= 1e-6 && 1.0 - demo.j >= 0.01 && j_gap <= 1e-6 && r.seconds <= r.budget_seconds;
    return r;
  }

  CriterionReport deformation() {
    using namespace selftest_detail;
    CriterionReport r = selftest_detail::report(6, "h(c+b)^2 identity");
    r.tolerance = 1e-6;
    r.budget_seconds = 60.0;
    Clock clock;
    const int n_inst = count(opts_, 5, 25);
    bool all_psd = true;
    for (int i = 0; i < n_inst; ++i) {
      Rng rng = Rng::stream(opts_.seed, stream_id(6, i));
      const Index n = rng.integer(2, 5);
      const Representation rep = full_matrix_algebra(n);
      const Functional h = i % 2 == 0 ? Functional::trace(random_density(n, rng))
                                      : Functional::vector(random_unit_vector(n, rng));
      const Matrix b = random_ginibre(n, n, rng);
      Matrix bb = b.adjoint() * b;
      bb /= op_norm(bb);
      const double c0 = rng.uniform(0.1, 1.0), c1 = rng.uniform(0.1, 1.0), c2 = rng.uniform(0.1, 1.0);
      const Matrix p = c0 * Matrix::Identity(n, n) + c1 * bb + c2 * bb * bb;
      const Matrix c = b * p;
      const auto check = uhlmann_deformation(rep, h, b, c, topts_);
      all_psd = all_psd && check.psd_ok;
      r.observed = std::max(r.observed, std::abs(check.lhs - check.rhs) / std::max(1.0, check.rhs));
    }
    r.instances = n_inst;
    r.seconds = clock.seconds();
    r.detail = std::string("relative to max(1, rhs); c+b PSD on all: ") + (all_psd ? "yes" : "no");
    r.pass = all_psd && r.observed <= r.tolerance && r.seconds <= r.budget_seconds;
    return r;
  }

  CriterionReport plant_and_recover() {
    using namespace selftest_detail;
    CriterionReport r = selftest_detail::report(7, "wedderburn plant-and-recover");
    r.tolerance = 1e-8;
    r.budget_seconds = 120.0;
    Clock clock;
    const int n_inst = count(opts_, 10, 50);
    int mismatches = 0, max_dim = 0;
    for (int i = 0; i < n_inst; ++i) {
      Rng rng = Rng::stream(opts_.seed, stream_id(7, i));
      std::vector<std::pair<Index, Index>> blocks;
      Index dim = 0;
      const int k = rng.integer(1, 3);
      for (int b = 0; b < k; ++b) {
        const Index m = rng.integer(1, 4), mult = rng.integer(1, 3);
        if (dim + m * mult > 24) continue;
        blocks.emplace_back(m, mult);
        dim += m * mult;
      }
      max_dim = std::max(max_dim, static_cast<int>(dim));
      const OperatorSubspace s = planted_algebra(blocks, random_unitary(dim, rng));
      auto expected = blocks;
      std::sort(expected.begin(), expected.end());
      for (int probe = 0; probe < 5; ++probe) {
        const std::uint64_t probe_seed = opts_.seed * 7919ULL + static_cast<std::uint64_t>(i) * 5ULL + probe;
        const auto dec = wedderburn_decompose(s, probe_seed, topts_.wedderburn);
        if (dec.shape() != expected) ++mismatches;
        r.observed = std::max(r.observed, dec.residual);
      }
    }
    r.instances = n_inst;
    r.seconds = clock.seconds();
    r.detail = "multiset mismatches " + std::to_string(mismatches) + " over 5 probes each, max ambient dim " +
               std::to_string(max_dim);
    r.pass = mismatches == 0 && r.observed <= r.tolerance && r.seconds <= r.budget_seconds;
    return r;
  }

  CriterionReport jacobi() {
    CriterionReport r = selftest_detail::report(8, "jacobi reconstruction");
    r.tolerance = 1e-8;
    r.budget_seconds = 5.0;
    selftest_detail::Clock clock;
    const int d = 10;
    std::vector<long double> gauss(2 * d + 1), legendre(2 * d + 1);
    long double dfact = 1.0L;
    for (int k = 0; k <= 2 * d; ++k) {
      if (k % 2 == 1) {
        gauss[static_cast<std::size_t>(k)] = 0.0L;
        legendre[static_cast<std::size_t>(k)] = 0.0L;
      } else {
        if (k >= 2) dfact *= static_cast<long double>(k - 1);
        gauss[static_cast<std::size_t>(k)] = dfact;
        legendre[static_cast<std::size_t>(k)] = 1.0L / static_cast<long double>(k + 1);
      }
    }
    double coeff_gap = 0.0, moment_gap = 0.0;
    for (const auto* s : {&gauss, &legendre}) {
      const std::vector<double> sd(s->begin(), s->end());
      const auto jm = jacobi_from_moments(MomentSequence(sd));
      const auto [oa, ob] = selftest_detail::gram_schmidt_recurrence(*s, d);
      for (std::size_t k = 0; k < oa.size(); ++k) coeff_gap = std::max(coeff_gap, std::abs(jm.a[k] - oa[k]));
      for (std::size_t k = 0; k < ob.size(); ++k) coeff_gap = std::max(coeff_gap, std::abs(jm.b[k] - ob[k]));
      const auto rec = jm.reconstruct_moments(sd[0], 2 * d - 1);
      for (std::size_t n = 0; n < rec.size(); ++n)
        moment_gap = std::max(moment_gap, std::abs(rec[n] - sd[n]) / std::max(1.0, std::abs(sd[n])));
    }
    r.observed = coeff_gap;
    r.instances = 2;
    r.seconds = clock.seconds();
    r.detail = "reconstructed moments rel gap " + selftest_detail::fmt("%.1e", moment_gap) + " (tol 1e-8)";
    r.pass = coeff_gap <= r.tolerance && moment_gap <= 1e-8 && r.seconds <= r.budget_seconds;
    return r;
  }

  CriterionReport monotonicity() {
    using namespace selftest_detail;
    CriterionReport r = selftest_detail::report(9, "monotonicity in the algebra");
    r.tolerance = 1e-9;
    r.budget_seconds = 30.0;
    Clock clock;
    const int n_inst = count(opts_, 5, 20);
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_inst; ++i) {
      Rng rng = Rng::stream(opts_.seed, stream_id(9, i));
      const Index n = rng.integer(4, 8);
      const Matrix u = random_unitary(n, rng);
      Matrix dmat = Matrix::Zero(n, n);
      Matrix blocks = Matrix::Zero(n, n);
      for (Index g = 0; g < n; g += 2) {
        const Index w = std::min<Index>(2, n - g);
        dmat.block(g, g, w, w) = static_cast<double>(g / 2 + 1) * Matrix::Identity(w, w);
        blocks.block(g, g, w, w) = random_hermitian(w, rng).matrix();
      }
      std::map<std::string, Matrix> gens{{"d", u * dmat * u.adjoint()}};
      const Representation r1(n, gens);
      gens.emplace("e", u * blocks * u.adjoint());
      const Representation r2(n, gens);
      gens.emplace("f", random_ginibre(n, n, rng));
      const Representation r3(n, gens);
      const Vector phi = random_unit_vector(n, rng);
      const Vector psi = random_unit_vector(n, rng);
      const double p1 = transition_probability(r1, phi, psi, topts_).probability;
      const double p2 = transition_probability(r2, phi, psi, topts_).probability;
      const double p3 = transition_probability(r3, phi, psi, topts_).probability;
      worst = std::max({worst, p2 - p1, p3 - p2});
      pairs_.push_back({r1, phi, psi, p1});
      pairs_.push_back({r2, phi, psi, p2});
      pairs_.push_back({r3, phi, psi, p3});
    }
    r.observed = worst;
    r.instances = n_inst;
    r.seconds = clock.seconds();
    r.detail = "observed = max P(larger) - P(smaller)";
    r.pass = worst <= r.tolerance && r.seconds <= r.budget_seconds;
    return r;
  }

  CriterionReport symmetry_and_range() {
    CriterionReport r = selftest_detail::report(10, "symmetry and range");
    r.tolerance = 1e-9;
    r.budget_seconds = 60.0;
    selftest_detail::Clock clock;
    double range_violation = 0.0;
    for (const auto& inst : pairs_) {
      const double swapped = transition_probability(inst.rep, inst.psi, inst.phi, topts_).probability;
      r.observed = std::max(r.observed, std::abs(swapped - inst.p));
      const double bound = inst.phi.squaredNorm() * inst.psi.squaredNorm();
      range_violation = std::max({range_violation, -inst.p, inst.p - bound});
    }
    r.instances = static_cast<int>(pairs_.size());
    r.seconds = clock.seconds();
    r.detail = "range violation " + selftest_detail::fmt("%.1e", range_violation) + " (tol 1e-9)";
    r.pass = !pairs_.empty() && r.observed <= r.tolerance && range_violation <= 1e-9 &&
             r.seconds <= r.budget_seconds;
    return r;
  }

 private:
  SelftestOptions opts_;
  TransitionOptions topts_;
  std::vector<selftest_detail::PairInstance> pairs_;
};

inline std::vector<CriterionReport> run_selftest(const SelftestOptions& opts,
                                                 const std::function<void(const CriterionReport&)>& on_report = {}) {
  return Selftest(opts).run(on_report);
}

}  // namespace transit
