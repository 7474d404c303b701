#pragma once

// Dense complex linear algebra kernel used throughout the library.
//
// Everything operates on Eigen dynamic complex matrices. Functions are pure;
// shape errors raise ValidationError, solver failures NumericalError.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "transit/errors.hpp"

namespace transit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

inline double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

inline bool all_finite(const Matrix& a) { return a.allFinite(); }

inline void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw ValidationError(std::string(what) + ": expected a square matrix, got " +
                          std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

inline void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                          std::to_string(b.cols()));
  }
}

/// Square complex matrix with A = A†. Construction symmetrizes exactly,
/// A <- (A + A†)/2, so downstream code never sees a skew part.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  explicit HermitianMatrix(const Matrix& a) {
    require_square(a, "HermitianMatrix");
    if (!all_finite(a)) throw ValidationError("HermitianMatrix: non-finite entry");
    m_ = 0.5 * (a + a.adjoint());
  }

  static HermitianMatrix identity(Index n) { return HermitianMatrix(Matrix::Identity(n, n)); }

  static HermitianMatrix diagonal(const RealVector& d) {
    return HermitianMatrix(Matrix(d.cast<Complex>().asDiagonal()));
  }

  const Matrix& matrix() const noexcept { return m_; }
  Index rows() const noexcept { return m_.rows(); }
  Index cols() const noexcept { return m_.cols(); }
  double trace() const { return m_.trace().real(); }

 private:
  Matrix m_;
};

struct EigenDecomposition {
  RealVector values;  ///< ascending
  Matrix vectors;     ///< unitary, columns are eigenvectors
};

/// Hermitian eigendecomposition A = U diag(λ) U†, eigenvalues ascending.
inline EigenDecomposition eigh(const HermitianMatrix& a) {
  if (a.rows() == 0) return {RealVector(), Matrix()};
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigensolver", "eigh: Hermitian eigensolver did not converge");
  }
  EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  const Index n = a.rows();
  const double orth = max_abs(out.vectors.adjoint() * out.vectors - Matrix::Identity(n, n));
  if (orth > 1e-10) {
    throw NumericalError("eigensolver", "eigh: eigenvectors lost orthonormality",
                         {{"orthonormality_residual", orth}});
  }
  return out;
}

inline double op_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

inline RealVector singular_values(const Matrix& a) {
  if (a.size() == 0) return RealVector();
  if (std::min(a.rows(), a.cols()) > 64) {
    Eigen::BDCSVD<Matrix> svd(a);
    return svd.singularValues();
  }
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues();
}

/// Sum of singular values.
inline double trace_norm(const Matrix& a) { return singular_values(a).sum(); }

/// Unitary W with Tr(W A) = ‖A‖₁ (the polar factor of A†).
inline Matrix trace_norm_maximizer(const Matrix& a) {
  require_square(a, "trace_norm_maximizer");
  if (a.size() == 0) return Matrix();
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixV() * svd.matrixU().adjoint();
}

/// Largest-magnitude negative eigenvalue accepted by psd_sqrt, relative to ‖P‖_op.
inline constexpr double kPsdClamp = 1e-10;

/// Principal square root of a positive semidefinite matrix. Eigenvalues in
/// [-1e-10‖P‖, 0) are clamped to zero; anything more negative is rejected.
inline HermitianMatrix psd_sqrt(const HermitianMatrix& p) {
  if (p.rows() == 0) return p;
  const auto eig = eigh(p);
  const double scale = std::max(std::abs(eig.values(0)), std::abs(eig.values(eig.values.size() - 1)));
  if (eig.values(0) < -kPsdClamp * scale) {
    throw ValidationError("psd_sqrt: matrix is not positive semidefinite (min eigenvalue " +
                          std::to_string(eig.values(0)) + ")");
  }
  const RealVector roots = eig.values.cwiseMax(0.0).cwiseSqrt();
  return HermitianMatrix(eig.vectors * roots.cast<Complex>().asDiagonal() * eig.vectors.adjoint());
}

/// True when every eigenvalue is >= -tol·max(1, ‖P‖_op).
inline bool is_psd(const HermitianMatrix& p, double tol = kPsdClamp) {
  if (p.rows() == 0) return true;
  const auto eig = eigh(p);
  const double scale = std::max({1.0, std::abs(eig.values(0)), std::abs(eig.values(eig.values.size() - 1))});
  return eig.values(0) >= -tol * scale;
}

/// Hilbert–Schmidt inner product Tr(A†B), conjugate-linear in A.
inline Complex hs_inner(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "hs_inner");
  return (a.conjugate().cwiseProduct(b)).sum();
}

/// Kronecker product; (A⊗B)(i*p+k, j*q+l) = A(i,j) B(k,l).
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

enum class Factor { A, B };

/// Partial trace of X on ℂ^{dimA}⊗ℂ^{dimB} over the selected factor.
/// Tracing over B satisfies Tr((y⊗I)X) = Tr(y · partial_trace(X, B)).
inline Matrix partial_trace(const Matrix& x, Index dim_a, Index dim_b, Factor over) {
  if (dim_a < 0 || dim_b < 0 || x.rows() != dim_a * dim_b || x.cols() != dim_a * dim_b) {
    throw ValidationError("partial_trace: matrix is " + std::to_string(x.rows()) + "x" +
                          std::to_string(x.cols()) + ", expected " + std::to_string(dim_a * dim_b) +
                          " square");
  }
  if (over == Factor::B) {
    Matrix out = Matrix::Zero(dim_a, dim_a);
    for (Index i = 0; i < dim_a; ++i)
      for (Index j = 0; j < dim_a; ++j)
        for (Index k = 0; k < dim_b; ++k) out(i, j) += x(i * dim_b + k, j * dim_b + k);
    return out;
  }
  Matrix out = Matrix::Zero(dim_b, dim_b);
  for (Index i = 0; i < dim_a; ++i) out += x.block(i * dim_b, i * dim_b, dim_b, dim_b);
  return out;
}

/// Frobenius-normalized copy; zero stays zero.
inline Matrix normalized(const Matrix& a) {
  const double n = a.norm();
  return n > 0.0 ? Matrix(a / n) : a;
}

}  // namespace transit
