#pragma once

// Commutants, centers and the Artin–Wedderburn block structure of finite
// dimensional *-algebras of matrices.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "transit/random.hpp"
#include "transit/star_algebra.hpp"

namespace transit {

namespace detail {

/// Groups ascending eigenvalues into runs whose consecutive gaps are <= tol.
inline std::vector<std::vector<Index>> cluster_ascending(const RealVector& values, double tol) {
  std::vector<std::vector<Index>> out;
  for (Index i = 0; i < values.size(); ++i) {
    if (out.empty() || values(i) - values(i - 1) > tol) out.emplace_back();
    out.back().push_back(i);
  }
  return out;
}

inline Matrix columns(const Matrix& u, const std::vector<Index>& idx) {
  Matrix out(u.rows(), static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out.col(static_cast<Index>(k)) = u.col(idx[k]);
  return out;
}

/// Random Hermitian element of span{elements}, using real coefficients on the
/// Hermitian and anti-Hermitian parts so *-closed spans stay inside.
inline Matrix random_hermitian_in(const std::vector<Matrix>& elements, Index dim, Rng& rng) {
  Matrix h = Matrix::Zero(dim, dim);
  for (const auto& e : elements) {
    h += rng.normal() * 0.5 * (e + e.adjoint());
    h += rng.normal() * (-0.5 * kI) * (e - e.adjoint());
  }
  return 0.5 * (h + h.adjoint());
}

inline Matrix random_element_in(const std::vector<Matrix>& elements, Index dim, Rng& rng) {
  Matrix x = Matrix::Zero(dim, dim);
  for (const auto& e : elements) x += Complex(rng.normal(), rng.normal()) * e;
  return x;
}

inline bool is_hermitian(const Matrix& g) { return max_abs(g - g.adjoint()) <= 1e-14 * std::max(1.0, max_abs(g)); }

/// Polar (unitary) factor of a square matrix.
inline Matrix polar_unitary(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace detail

/// Basis of {T : T g = g T and T g† = g† T for every g in `constraints`}.
///
/// The null space of the stacked linear system is solved in a reduced
/// coordinate system: the commutant lies inside the commutant of a single
/// random Hermitian element h of the *-algebra, i.e. inside the matrices that
/// are block diagonal over the eigenspaces of h. Gram entries of the
/// constraint map on that basis are assembled in closed form.
inline OperatorSubspace commutant_of(const std::vector<Matrix>& constraints_in, Index dim) {
  std::vector<Matrix> constraints;
  for (const auto& g : constraints_in) {
    if (g.rows() != dim || g.cols() != dim) throw ValidationError("commutant: constraint has wrong shape");
    Matrix c = g - (g.trace() / static_cast<double>(dim)) * Matrix::Identity(dim, dim);
    if (c.norm() <= 1e-14 * std::max(1.0, g.norm())) continue;  // scalar
    c = normalized(c);
    const bool herm = detail::is_hermitian(c);
    constraints.push_back(c);
    if (!herm) constraints.push_back(c.adjoint());
  }

  Rng rng(0x0C033u);
  const Matrix h = detail::random_hermitian_in(constraints, dim, rng);
  const auto eig = eigh(HermitianMatrix(h));
  const double scale = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  const auto clusters = detail::cluster_ascending(eig.values, 1e-6 * scale);
  const Matrix& u = eig.vectors;

  // Unknowns: matrix units e_p e_q† with p, q in the same eigenspace of h.
  std::vector<std::pair<Index, Index>> units;
  for (const auto& c : clusters)
    for (Index p : c)
      for (Index q : c) units.emplace_back(p, q);
  const auto r = static_cast<Index>(units.size());

  Matrix gram = Matrix::Zero(r, r);
  for (const auto& g0 : constraints) {
    const Matrix g = u.adjoint() * g0 * u;
    const Matrix ggh = g * g.adjoint();
    const Matrix ghg = g.adjoint() * g;
    for (Index a = 0; a < r; ++a) {
      const auto [p, q] = units[static_cast<std::size_t>(a)];
      for (Index b = 0; b < r; ++b) {
        const auto [pp, qq] = units[static_cast<std::size_t>(b)];
        Complex v = -g(p, pp) * std::conj(g(q, qq)) - std::conj(g(pp, p)) * g(qq, q);
        if (p == pp) v += ggh(qq, q);
        if (q == qq) v += ghg(p, pp);
        gram(a, b) += v;
      }
    }
  }

  std::vector<Matrix> basis;
  if (r > 0) {
    const auto ge = eigh(HermitianMatrix(gram));
    // constraints have unit norm, so the Gram scale is at least O(1)
    const double thresh = 1e-11 * std::max(1.0, ge.values(r - 1));
    for (Index k = 0; k < r; ++k) {
      if (ge.values(k) > thresh) break;
      Matrix t = Matrix::Zero(dim, dim);
      for (Index a = 0; a < r; ++a) {
        const auto [p, q] = units[static_cast<std::size_t>(a)];
        t(p, q) = ge.vectors(a, k);
      }
      basis.push_back(u * t * u.adjoint());
    }
  }
  return OperatorSubspace(dim, std::move(basis));
}

/// Symmetrized commutant π(A)′ of a representation.
inline OperatorSubspace commutant(const Representation& rep) { return commutant_of(rep.star_generators(), rep.dim()); }

/// Commutant of the set spanned by an operator subspace.
inline OperatorSubspace commutant(const OperatorSubspace& s) { return commutant_of(s.basis(), s.ambient_dim()); }

/// Largest distance between two subspaces: how far each basis element of one
/// lies from the other, with a dimension mismatch reported as infinity.
inline double subspace_distance(const OperatorSubspace& a, const OperatorSubspace& b) {
  if (a.dimension() != b.dimension()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (const auto& x : a.basis()) d = std::max(d, b.residual(x));
  for (const auto& x : b.basis()) d = std::max(d, a.residual(x));
  return d;
}

/// Seeded random check that S is closed under products and adjoints;
/// returns the largest relative residual seen.
inline double random_closure_residual(const OperatorSubspace& s, int trials = 3) {
  Rng rng(0xC105Eu);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Matrix a = detail::random_element_in(s.basis(), s.ambient_dim(), rng);
    const Matrix b = detail::random_element_in(s.basis(), s.ambient_dim(), rng);
    const double na = a.norm(), nb = b.norm();
    if (na == 0.0 || nb == 0.0) continue;
    worst = std::max(worst, s.residual(a * b) / (na * nb));
    worst = std::max(worst, s.residual(a.adjoint()) / na);
  }
  return worst;
}

/// Center S ∩ S′ of a *-algebra of operators.
inline OperatorSubspace center(const OperatorSubspace& s) {
  const double closure = random_closure_residual(s);
  if (closure > 1e-8) {
    throw ValidationError("center: subspace is not a *-algebra (closure residual " + std::to_string(closure) + ")");
  }
  const OperatorSubspace sc = commutant(s);
  const auto ns = static_cast<Index>(s.dimension());
  const auto nc = static_cast<Index>(sc.dimension());
  std::vector<Matrix> basis;
  if (ns > 0 && nc > 0) {
    Matrix overlap(ns, nc);
    for (Index i = 0; i < ns; ++i)
      for (Index j = 0; j < nc; ++j) overlap(i, j) = hs_inner(s.basis()[i], sc.basis()[j]);
    Eigen::JacobiSVD<Matrix> svd(overlap, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    for (Index k = 0; k < sv.size(); ++k) {
      if (sv(k) < 1.0 - 1e-10) break;
      Matrix z = Matrix::Zero(s.ambient_dim(), s.ambient_dim());
      for (Index j = 0; j < nc; ++j) z += svd.matrixV()(j, k) * sc.basis()[j];
      basis.push_back(z);
    }
  }
  return span_of(s.ambient_dim(), basis);
}

/// One summand V (M_m ⊗ I_n) V† of a block decomposition. The isometry maps
/// ℂ^m⊗ℂ^n (index a*n + b) into the ambient space.
struct Block {
  Matrix isometry;
  Index m = 0;
  Index n = 0;
};

struct BlockDecomposition {
  std::vector<Block> blocks;
  double residual = 0.0;
  int attempts = 0;

  /// [V_1 … V_K]
  Matrix unitary() const {
    Index d = 0;
    for (const auto& b : blocks) d += b.isometry.cols();
    const Index rows = blocks.empty() ? 0 : blocks.front().isometry.rows();
    Matrix u(rows, d);
    Index off = 0;
    for (const auto& b : blocks) {
      u.middleCols(off, b.isometry.cols()) = b.isometry;
      off += b.isometry.cols();
    }
    return u;
  }

  /// Sorted (m, n) pairs.
  std::vector<std::pair<Index, Index>> shape() const {
    std::vector<std::pair<Index, Index>> out;
    for (const auto& b : blocks) out.emplace_back(b.m, b.n);
    std::sort(out.begin(), out.end());
    return out;
  }
};

/// ‖V† s V − ⊕ x_k⊗I_{n_k}‖_F where x_k is the best fit in each block.
inline double block_form_residual(const BlockDecomposition& dec, const Matrix& s) {
  const Matrix u = dec.unitary();
  const Matrix t = u.adjoint() * s * u;
  double err2 = 0.0;
  Index off = 0;
  for (const auto& b : dec.blocks) {
    const Index w = b.m * b.n;
    const Matrix diag = t.block(off, off, w, w);
    const Matrix x = partial_trace(diag, b.m, b.n, Factor::B) / static_cast<double>(b.n);
    err2 += (diag - kron(x, Matrix::Identity(b.n, b.n))).squaredNorm();
    // everything outside the diagonal blocks must vanish
    err2 += t.block(off, 0, w, t.cols()).squaredNorm() - diag.squaredNorm();
    off += w;
  }
  return std::sqrt(std::max(0.0, err2));
}

inline double block_form_residual(const BlockDecomposition& dec, const OperatorSubspace& s) {
  double r = 0.0;
  for (const auto& x : s.basis()) r = std::max(r, block_form_residual(dec, x));
  return r;
}

struct WedderburnOptions {
  double block_tol = 1e-8;
  int max_attempts = 5;
};

namespace detail {

/// One randomized attempt; returns nullopt-like empty blocks on a structural
/// mismatch (degenerate draw).
inline BlockDecomposition wedderburn_attempt(const OperatorSubspace& s, const OperatorSubspace& z, Rng& rng) {
  const Index d = s.ambient_dim();
  BlockDecomposition out;

  const Matrix zc = random_hermitian_in(z.basis(), d, rng);
  const auto ze = eigh(HermitianMatrix(zc));
  const double zscale = std::max(1e-300, ze.values.cwiseAbs().maxCoeff());
  const auto central = cluster_ascending(ze.values, 1e-8 * zscale);
  if (central.size() != z.dimension()) return {};

  for (const auto& cl : central) {
    const Matrix uj = columns(ze.vectors, cl);
    const Index rj = uj.cols();
    std::vector<Matrix> compressed;
    double scale = 0.0;
    for (const auto& b : s.basis()) {
      compressed.push_back(uj.adjoint() * b * uj);
      scale = std::max(scale, compressed.back().norm());
    }
    HsGramSchmidt gs(1e-10, scale);
    for (const auto& c : compressed) gs.add(c);
    const auto& sj = gs.basis();
    const auto m = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(sj.size()))));
    if (m * m != static_cast<Index>(sj.size()) || m == 0 || rj % m != 0) return {};
    const Index n = rj / m;

    const Matrix x = random_hermitian_in(sj, rj, rng);
    const auto xe = eigh(HermitianMatrix(x));
    const double xscale = std::max(1e-300, xe.values.cwiseAbs().maxCoeff());
    const auto eigspaces = cluster_ascending(xe.values, 1e-8 * xscale);
    if (static_cast<Index>(eigspaces.size()) != m) return {};
    for (const auto& e : eigspaces)
      if (static_cast<Index>(e.size()) != n) return {};

    // Match every eigenspace to the first one through a random element y:
    // P_i y P_0 is a multiple of a partial isometry between them.
    const Matrix y = random_element_in(sj, rj, rng);
    const double ynorm = std::max(1e-300, y.norm());
    std::vector<Matrix> w;
    w.push_back(columns(xe.vectors, eigspaces[0]));
    for (Index i = 1; i < m; ++i) {
      const Matrix wi = columns(xe.vectors, eigspaces[static_cast<std::size_t>(i)]);
      const Matrix link = wi.adjoint() * y * w[0];
      if (op_norm(link) < 1e-6 * ynorm) return {};
      w.push_back(wi * polar_unitary(link));
    }
    Block blk;
    blk.m = m;
    blk.n = n;
    blk.isometry.resize(d, m * n);
    for (Index a = 0; a < m; ++a)
      for (Index b = 0; b < n; ++b) blk.isometry.col(a * n + b) = uj * w[static_cast<std::size_t>(a)].col(b);
    out.blocks.push_back(std::move(blk));
  }
  out.residual = block_form_residual(out, s);
  return out;
}

}  // namespace detail

/// Artin–Wedderburn decomposition S ≅ ⊕_k M_{m_k}⊗I_{n_k} of a *-algebra
/// containing the identity, certified a posteriori by the block-form
/// residual. Up to `max_attempts` random draws from `seed`.
inline BlockDecomposition wedderburn_decompose(const OperatorSubspace& s, std::uint64_t seed,
                                               const WedderburnOptions& opts = {}) {
  const Index d = s.ambient_dim();
  if (s.dimension() == 0 || s.residual(Matrix::Identity(d, d)) > 1e-8 * std::sqrt(static_cast<double>(d))) {
    throw ValidationError("wedderburn_decompose: subspace does not contain the identity");
  }
  const OperatorSubspace z = center(s);
  Rng rng(seed);
  double best = std::numeric_limits<double>::infinity();
  for (int attempt = 1; attempt <= opts.max_attempts; ++attempt) {
    auto dec = detail::wedderburn_attempt(s, z, rng);
    if (dec.blocks.empty()) continue;
    best = std::min(best, dec.residual);
    if (dec.residual <= opts.block_tol) {
      dec.attempts = attempt;
      return dec;
    }
  }
  throw NumericalError("decomposition-failed",
                       "wedderburn_decompose: block residual never below tolerance",
                       {{"best_residual", best}, {"tolerance", opts.block_tol}});
}

/// Per-block reduced densities t̃_k with Tr(x t) = Σ_k Tr(x_k t̃_k) for every
/// x = V(⊕ x_k⊗I)V† in the decomposed algebra.
struct HatOperator {
  std::vector<Matrix> reduced;   ///< t̃_k, m_k x m_k
  double canonical_trace = 0.0;  ///< tr_M(t̂) = Σ_k Tr t̃_k
  double pairing_residual = 0.0;

  /// t̂ = V(⊕ t̃_k⊗I_{n_k})V† on the ambient space.
  Matrix ambient(const BlockDecomposition& dec) const {
    const Matrix u = dec.unitary();
    Matrix blockdiag = Matrix::Zero(u.cols(), u.cols());
    Index off = 0;
    for (std::size_t k = 0; k < dec.blocks.size(); ++k) {
      const auto& b = dec.blocks[k];
      blockdiag.block(off, off, b.m * b.n, b.m * b.n) = kron(reduced[k], Matrix::Identity(b.n, b.n));
      off += b.m * b.n;
    }
    return u * blockdiag * u.adjoint();
  }
};

inline HatOperator hat_operator(const BlockDecomposition& dec, const HermitianMatrix& t, double tol = 1e-9) {
  const Matrix u = dec.unitary();
  if (t.rows() != u.rows()) throw ValidationError("hat_operator: density size does not match decomposition");
  HatOperator out;
  for (const auto& b : dec.blocks) {
    const Matrix local = b.isometry.adjoint() * t.matrix() * b.isometry;
    out.reduced.push_back(partial_trace(local, b.m, b.n, Factor::B));
    out.canonical_trace += out.reduced.back().trace().real();
  }
  Rng rng(0x4A7u);
  const double scale = std::max(1.0, t.matrix().norm());
  for (int trial = 0; trial < 20; ++trial) {
    Matrix blockdiag = Matrix::Zero(u.cols(), u.cols());
    Complex rhs = 0.0;
    Index off = 0;
    for (std::size_t k = 0; k < dec.blocks.size(); ++k) {
      const auto& b = dec.blocks[k];
      Matrix x(b.m, b.m);
      for (Index i = 0; i < b.m; ++i)
        for (Index j = 0; j < b.m; ++j) x(i, j) = Complex(rng.normal(), rng.normal());
      blockdiag.block(off, off, b.m * b.n, b.m * b.n) = kron(x, Matrix::Identity(b.n, b.n));
      rhs += (x * out.reduced[k]).trace();
      off += b.m * b.n;
    }
    const Matrix xa = u * blockdiag * u.adjoint();
    const Complex lhs = (xa * t.matrix()).trace();
    out.pairing_residual = std::max(out.pairing_residual, std::abs(lhs - rhs) / (scale * std::max(1.0, xa.norm())));
  }
  if (out.pairing_residual > tol) {
    throw NumericalError("pairing", "hat_operator: pairing identity fails",
                         {{"pairing_residual", out.pairing_residual}});
  }
  return out;
}

}  // namespace transit
