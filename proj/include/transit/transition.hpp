#pragma once

// Transition probabilities between positive functionals: the block
// trace-norm formula over the commutant, the trace formula on factors, the
// deformation identity P(f,g) = h(c†b)², and a projected-gradient oracle.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "transit/commutant.hpp"
#include "transit/gns.hpp"

namespace transit {

struct TransitionResult {
  double probability = 0.0;
  Matrix optimal_contraction;
  std::string route;
  double certificate = 0.0;       ///< |⟨Tφ,ψ⟩|² recomputed from T
  double inner_product_sq = 0.0;  ///< |⟨φ,ψ⟩|² of the vectors used
  double commutant_residual = 0.0;
  double block_residual = 0.0;
};

struct TransitionOptions {
  std::uint64_t seed = 0;
  WedderburnOptions wedderburn{};
  /// Debug fault: read each commutant block with its tensor factors swapped.
  bool transpose_blocks = false;
};

/// Block trace-norm evaluation for a precomputed commutant N and its
/// decomposition; shared by every route that ends in vectors.
inline TransitionResult transition_from_blocks(const OperatorSubspace& n, const BlockDecomposition& dec,
                                               const Vector& phi, const Vector& psi, bool transpose_blocks = false) {
  const Index d = phi.size();
  TransitionResult out;
  out.route = "block-formula";
  out.block_residual = dec.residual;
  Matrix t = Matrix::Zero(d, d);
  double amplitude = 0.0;
  for (const auto& b : dec.blocks) {
    const Vector x = b.isometry.adjoint() * phi;
    const Vector y = b.isometry.adjoint() * psi;
    const Matrix xk = x * y.adjoint();
    if (!transpose_blocks) {
      const Matrix z = partial_trace(xk, b.m, b.n, Factor::B);
      amplitude += trace_norm(z);
      t += b.isometry * kron(trace_norm_maximizer(z), Matrix::Identity(b.n, b.n)) * b.isometry.adjoint();
    } else {
      const Matrix z = partial_trace(xk, b.m, b.n, Factor::A);
      amplitude += trace_norm(z);
      t += b.isometry * kron(Matrix::Identity(b.m, b.m), trace_norm_maximizer(z)) * b.isometry.adjoint();
    }
  }
  out.probability = amplitude * amplitude;
  out.optimal_contraction = std::move(t);
  out.certificate = std::norm(psi.dot(out.optimal_contraction * phi));
  out.inner_product_sq = std::norm(psi.dot(phi));
  out.commutant_residual = n.residual(out.optimal_contraction);
  return out;
}

namespace detail {

inline void require_vectors(Index dim, const Vector& phi, const Vector& psi, const char* what) {
  if (phi.size() != dim || psi.size() != dim) {
    throw ValidationError(std::string(what) + ": vectors must have the representation dimension " +
                          std::to_string(dim));
  }
  if (!phi.allFinite() || !psi.allFinite()) throw ValidationError(std::string(what) + ": non-finite vector entry");
  if (phi.norm() == 0.0 || psi.norm() == 0.0) throw ValidationError(std::string(what) + ": zero vector");
}

}  // namespace detail

/// sup |⟨Tφ,ψ⟩|² over contractions T in the symmetrized commutant, evaluated
/// as (Σ_k ‖Z_k‖₁)² over the blocks of the commutant, with the maximizing T.
inline TransitionResult transition_probability(const Representation& rep, const Vector& phi, const Vector& psi,
                                               const TransitionOptions& opts = {}) {
  detail::require_vectors(rep.dim(), phi, psi, "transition_probability");
  const OperatorSubspace n = commutant(rep);
  const BlockDecomposition dec = wedderburn_decompose(n, opts.seed, opts.wedderburn);
  return transition_from_blocks(n, dec, phi, psi, opts.transpose_blocks);
}

/// (‖√t √s‖₁)², the Uhlmann fidelity of two PSD matrices.
inline double fidelity(const HermitianMatrix& s, const HermitianMatrix& t) {
  if (s.rows() != t.rows()) throw ValidationError("fidelity: size mismatch");
  if (!is_psd(s) || !is_psd(t)) throw ValidationError("fidelity: input is not positive semidefinite");
  const double a = trace_norm(psd_sqrt(t).matrix() * psd_sqrt(s).matrix());
  return a * a;
}

struct TraceTransitionOptions {
  TransitionOptions transition{};
  /// Skip the factor shortcut and always go through purifications.
  bool force_general = false;
};

/// Transition probability of a ↦ Tr(ρ(a)s) and a ↦ Tr(ρ(a)t).
///
/// When M = π(A)″ is a factor the trace formula (tr_M|t̂^{1/2}ŝ^{1/2}|)² is
/// used and the optimal contraction is reported on the canonical
/// purification ℂ^m⊗ℂ^m of the reduced densities. Otherwise both functionals
/// are purified, cut down to their cyclic subspaces and compared inside
/// the direct sum.
inline TransitionResult transition_trace_functionals(const Representation& rep, const HermitianMatrix& s,
                                                     const HermitianMatrix& t,
                                                     const TraceTransitionOptions& opts = {}) {
  if (s.rows() != rep.dim() || t.rows() != rep.dim()) {
    throw ValidationError("transition_trace_functionals: density size does not match representation");
  }
  if (!is_psd(s) || !is_psd(t)) throw ValidationError("transition_trace_functionals: density is not PSD");
  if (s.trace() <= 0.0 || t.trace() <= 0.0) throw ValidationError("transition_trace_functionals: zero density");

  if (!opts.force_general) {
    const OperatorSubspace m = commutant(commutant(rep));
    const OperatorSubspace z = center(m);
    if (z.dimension() == 1) {
      const BlockDecomposition dec = wedderburn_decompose(m, opts.transition.seed, opts.transition.wedderburn);
      const HatOperator sh = hat_operator(dec, s);
      const HatOperator th = hat_operator(dec, t);
      const Matrix ss = psd_sqrt(HermitianMatrix(sh.reduced[0])).matrix();
      const Matrix ts = psd_sqrt(HermitianMatrix(th.reduced[0])).matrix();
      const Matrix y = ts * ss;
      const double a = trace_norm(y);
      const Index k = y.rows();
      TransitionResult out;
      out.route = "trace-formula";
      out.probability = a * a;
      out.block_residual = dec.residual;
      out.optimal_contraction = kron(Matrix::Identity(k, k), trace_norm_maximizer(y).transpose());
      const Vector phi = vec(ss);
      const Vector psi = vec(ts);
      out.certificate = std::norm(psi.dot(out.optimal_contraction * phi));
      out.inner_product_sq = std::norm(psi.dot(phi));
      return out;
    }
  }

  const GnsResult gs = gns_from_density(rep, s);
  const GnsResult gt = gns_from_density(rep, t);
  const CyclicRestriction cs = restrict_to_cyclic(gs.rep, gs.cyclic);
  const CyclicRestriction ct = restrict_to_cyclic(gt.rep, gt.cyclic);
  const DirectSum sum = direct_sum({cs.rep, ct.rep});
  TransitionResult out =
      transition_probability(sum.rep, sum.embed(0, cs.cyclic), sum.embed(1, ct.cyclic), opts.transition);
  out.route = "block-formula";
  return out;
}

struct DeformationCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool psd_ok = false;
  TransitionResult transition;
};

/// Compares P(h(b†·b), h(c†·c)) with h(c†b)², evaluated in a representation
/// where h is a vector functional.
inline DeformationCheck uhlmann_deformation(const Representation& rep_h, const Functional& h, const Matrix& b,
                                            const Matrix& c, const TransitionOptions& opts = {}) {
  const Index d = rep_h.dim();
  if (h.dim() != d) throw ValidationError("uhlmann_deformation: functional does not live on the representation");
  if (b.rows() != d || b.cols() != d || c.rows() != d || c.cols() != d) {
    throw ValidationError("uhlmann_deformation: b and c must be " + std::to_string(d) + "x" + std::to_string(d));
  }
  const AlgebraBasis alg = algebra_basis(rep_h);
  const double rb = alg.residual(b) / std::max(1.0, b.norm());
  const double rc = alg.residual(c) / std::max(1.0, c.norm());
  if (rb > 1e-8 || rc > 1e-8) {
    throw ValidationError("uhlmann_deformation: b or c lies outside the represented algebra (residual " +
                          std::to_string(std::max(rb, rc)) + ")");
  }

  Representation rep = rep_h;
  Vector base;
  Matrix pb = b, pc = c;
  if (h.kind() == Functional::Kind::vector) {
    base = h.vector_data();
  } else {
    const GnsResult g = gns_from_density(rep_h, h.density());
    rep = g.rep;
    base = g.cyclic;
    pb = kron(b, Matrix::Identity(d, d));
    pc = kron(c, Matrix::Identity(d, d));
  }

  DeformationCheck out;
  const Vector phi = pb * base;
  const Vector psi = pc * base;
  if (phi.norm() == 0.0 || psi.norm() == 0.0) {
    out.transition.route = "block-formula";
    out.lhs = 0.0;
  } else {
    out.transition = transition_probability(rep, phi, psi, opts);
    out.lhs = out.transition.probability;
  }
  const Matrix cb = c.adjoint() * b;
  const Complex value = evaluate(h, cb);
  out.rhs = std::norm(value);
  const double scale = std::max(1.0, max_abs(cb));
  out.psd_ok = max_abs(cb - cb.adjoint()) <= 1e-9 * scale && is_psd(HermitianMatrix(cb), 1e-9);
  return out;
}

struct OracleResult {
  double value = 0.0;  ///< best |⟨Tφ,ψ⟩|² seen; always a valid lower bound
  Matrix contraction;
  int iterations = 0;
  bool converged = false;
};

namespace detail {

/// Projection onto {T ∈ N : ‖T‖ ≤ 1}: alternate the HS projection onto N with
/// singular-value clipping (Dykstra corrections) until the iterate settles.
inline Matrix project_commutant_ball(const OperatorSubspace& n, const Matrix& y, int max_steps = 50) {
  Matrix x = y;
  Matrix p = Matrix::Zero(y.rows(), y.cols());
  Matrix q = Matrix::Zero(y.rows(), y.cols());
  for (int step = 0; step < max_steps; ++step) {
    const Matrix a = n.project(x + p);
    p = x + p - a;
    const Matrix b = a + q;
    const auto eig = eigh(HermitianMatrix(b.adjoint() * b));
    RealVector scale(eig.values.size());
    for (Index i = 0; i < scale.size(); ++i) {
      const double sigma = std::sqrt(std::max(0.0, eig.values(i)));
      scale(i) = sigma > 1.0 ? 1.0 / sigma : 1.0;
    }
    const Matrix next = b * eig.vectors * scale.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
    q = b - next;
    const double change = (next - x).norm();
    x = next;
    if (change <= 1e-13 * std::max(1.0, x.norm())) break;
  }
  return x;
}

}  // namespace detail

/// Projected gradient ascent of Re Tr(T φψ†) over contractions in the
/// commutant. Steps start at 1/‖φψ†‖ and grow linearly.
inline OracleResult oracle_max_contraction(const Representation& rep, const Vector& phi, const Vector& psi,
                                           int max_iters = 5000, double tol = 1e-6) {
  detail::require_vectors(rep.dim(), phi, psi, "oracle_max_contraction");
  const OperatorSubspace n = commutant(rep);
  const Matrix x = phi * psi.adjoint();
  const Matrix grad = x.adjoint();
  const double xn = op_norm(x);
  OracleResult out;
  Matrix t = Matrix::Zero(rep.dim(), rep.dim());
  out.contraction = t;
  for (int k = 0; k < max_iters; ++k) {
    const double step = static_cast<double>(k + 1) / xn;
    const Matrix next = detail::project_commutant_ball(n, t + step * grad);
    const double value = std::norm((next * x).trace());
    if (value > out.value) {
      out.value = value;
      out.contraction = next;
    }
    const double change = (next - t).norm();
    t = next;
    out.iterations = k + 1;
    if (change <= 1e-3 * tol * std::max(1.0, t.norm())) {
      out.converged = true;
      break;
    }
  }
  if (!out.converged) {
    throw NumericalError("oracle-not-converged", "oracle_max_contraction: no stationarity within max_iters",
                         {{"best_value", out.value}, {"iterations", static_cast<double>(out.iterations)}});
  }
  return out;
}

}  // namespace transit
