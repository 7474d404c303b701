#pragma once

// Seeded random instances: unitaries, densities, vectors, planted algebras.

#include <utility>
#include <vector>

#include "transit/linalg.hpp"
#include "transit/random.hpp"
#include "transit/star_algebra.hpp"

namespace transit {

inline Matrix random_ginibre(Index rows, Index cols, Rng& rng) {
  Matrix g(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  return g;
}

/// Haar unitary via QR of a Ginibre matrix with the phase correction.
inline Matrix random_unitary(Index n, Rng& rng) {
  const Matrix g = random_ginibre(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

inline Vector random_unit_vector(Index n, Rng& rng) {
  Vector v = random_ginibre(n, 1, rng).col(0);
  return v / v.norm();
}

inline HermitianMatrix random_hermitian(Index n, Rng& rng) {
  const Matrix g = random_ginibre(n, n, rng);
  return HermitianMatrix(0.5 * (g + g.adjoint()));
}

/// Random full-rank density of unit trace, g g† / Tr(g g†).
inline HermitianMatrix random_density(Index n, Rng& rng) {
  const Matrix g = random_ginibre(n, n, rng);
  const Matrix p = g * g.adjoint();
  return HermitianMatrix(p / p.trace().real());
}

/// U(⊕_k M_{m_k}⊗I_{n_k})U† as an orthonormal operator subspace.
inline OperatorSubspace planted_algebra(const std::vector<std::pair<Index, Index>>& blocks, const Matrix& u) {
  Index d = 0;
  for (const auto& [m, n] : blocks) d += m * n;
  if (u.rows() != d || u.cols() != d) throw ValidationError("planted_algebra: unitary size mismatch");
  std::vector<Matrix> basis;
  Index off = 0;
  for (const auto& [m, n] : blocks) {
    const Matrix id = Matrix::Identity(n, n) / std::sqrt(static_cast<double>(n));
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < m; ++j) {
        Matrix e = Matrix::Zero(m, m);
        e(i, j) = 1.0;
        Matrix x = Matrix::Zero(d, d);
        x.block(off, off, m * n, m * n) = kron(e, id);
        basis.push_back(u * x * u.adjoint());
      }
    off += m * n;
  }
  return OperatorSubspace(d, std::move(basis));
}

/// A representation whose generated algebra is U(⊕_k M_{m_k}⊗I_{n_k})U†.
/// Generators: a Hermitian element with distinct per-block spectra and the
/// per-block cyclic shifts tensored with identities.
inline Representation planted_representation(const std::vector<std::pair<Index, Index>>& blocks, const Matrix& u) {
  Index d = 0;
  for (const auto& [m, n] : blocks) d += m * n;
  Matrix clock = Matrix::Zero(d, d);
  Matrix shift = Matrix::Zero(d, d);
  Index off = 0;
  double level = 1.0;
  for (const auto& [m, n] : blocks) {
    Matrix c = Matrix::Zero(m, m);
    Matrix s = Matrix::Zero(m, m);
    for (Index i = 0; i < m; ++i) {
      c(i, i) = level;
      level += 1.0;
      s((i + 1) % m, i) = 1.0;
    }
    const Matrix id = Matrix::Identity(n, n);
    clock.block(off, off, m * n, m * n) = kron(c, id);
    shift.block(off, off, m * n, m * n) = kron(s, id);
    off += m * n;
  }
  return Representation(d, {{"clock", u * clock * u.adjoint()}, {"shift", u * shift * u.adjoint()}});
}

}  // namespace transit
