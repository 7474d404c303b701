#pragma once

// Concrete GNS data: purifications of trace functionals, cyclic subspaces,
// and the truncated Jacobi (orthonormal-polynomial) picture of moment
// functionals on ℂ[x].

#include <cmath>
#include <span>
#include <vector>

#include "transit/star_algebra.hpp"

namespace transit {

/// vec(C)[i*n + j] = C(i, j). With this stacking (a⊗I)vec(C) = vec(aC).
inline Vector vec(const Matrix& c) {
  Vector out(c.size());
  for (Index i = 0; i < c.rows(); ++i)
    for (Index j = 0; j < c.cols(); ++j) out(i * c.cols() + j) = c(i, j);
  return out;
}

inline Matrix unvec(const Vector& v, Index rows, Index cols) {
  if (v.size() != rows * cols) throw ValidationError("unvec: size mismatch");
  Matrix out(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) out(i, j) = v(i * cols + j);
  return out;
}

struct GnsResult {
  Representation rep;
  Vector cyclic;
  /// Gram matrix G_ij = ⟨b_j Φ, b_i Φ⟩ of the algebra basis applied to Φ.
  HermitianMatrix gram;
  /// Numerical rank of `gram`: dimension of the cyclic subspace.
  Index cyclic_rank = 0;
};

namespace detail {

inline Index numerical_rank(const HermitianMatrix& g, double rel_tol = 1e-10) {
  if (g.rows() == 0) return 0;
  const auto eig = eigh(g);
  const double top = std::max(0.0, eig.values(eig.values.size() - 1));
  Index r = 0;
  for (Index i = 0; i < eig.values.size(); ++i)
    if (eig.values(i) > rel_tol * top) ++r;
  return r;
}

inline GnsResult purify(const Representation& rho, const HermitianMatrix& t) {
  if (t.rows() != rho.dim()) throw ValidationError("gns_from_density: density size does not match representation");
  if (t.trace() <= 0.0) throw ValidationError("gns_from_density: density must have positive trace");
  const Index n = rho.dim();
  const Matrix id = Matrix::Identity(n, n);
  std::map<std::string, Matrix> gens;
  for (const auto& [name, g] : rho.generators()) gens.emplace(name, kron(g, id));
  GnsResult out;
  out.rep = Representation(n * n, std::move(gens));
  out.cyclic = vec(psd_sqrt(t).matrix());
  const auto basis = algebra_basis(rho);
  const auto k = static_cast<Index>(basis.dimension());
  std::vector<Vector> images;
  images.reserve(basis.dimension());
  for (const auto& b : basis.basis()) images.push_back(kron(b, id) * out.cyclic);
  Matrix gram(k, k);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j) gram(i, j) = images[i].dot(images[j]);
  out.gram = HermitianMatrix(gram);
  out.cyclic_rank = numerical_rank(out.gram);
  return out;
}

}  // namespace detail

/// Purification of a trace functional of a representation ρ: the
/// representation a ↦ ρ(a)⊗I on ℂⁿ⊗ℂⁿ with vector vec(t^{1/2}), so that
/// ⟨(ρ(a)⊗I)Φ, Φ⟩ = Tr(ρ(a) t).
inline GnsResult gns_from_density(const Representation& rho, const HermitianMatrix& t) {
  return detail::purify(rho, t);
}

/// GNS data of a ↦ Tr(a t) on the full matrix algebra M_n.
inline GnsResult gns_from_density(Index n, const HermitianMatrix& t) {
  if (t.rows() != n) throw ValidationError("gns_from_density: density is not n x n");
  return detail::purify(full_matrix_algebra(n), t);
}

/// A representation restricted to the cyclic subspace generated by a vector.
struct CyclicRestriction {
  Representation rep;
  Vector cyclic;   ///< coordinates of the vector in the orthonormal basis
  Matrix basis;    ///< isometry from the cyclic subspace into the ambient space
};

inline CyclicRestriction restrict_to_cyclic(const Representation& rep, const Vector& v) {
  if (v.size() != rep.dim()) throw ValidationError("restrict_to_cyclic: vector size mismatch");
  const auto alg = algebra_basis(rep);
  Matrix images(rep.dim(), static_cast<Index>(alg.dimension()));
  for (std::size_t i = 0; i < alg.dimension(); ++i) images.col(static_cast<Index>(i)) = alg.basis()[i] * v;
  Eigen::JacobiSVD<Matrix> svd(images, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Index r = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-10 * sv(0)) ++r;
  if (r == 0) throw ValidationError("restrict_to_cyclic: vector is zero");
  CyclicRestriction out;
  out.basis = svd.matrixU().leftCols(r);
  std::map<std::string, Matrix> gens;
  for (const auto& [name, g] : rep.generators()) gens.emplace(name, out.basis.adjoint() * g * out.basis);
  out.rep = Representation(r, std::move(gens));
  out.cyclic = out.basis.adjoint() * v;
  return out;
}

// ---------------------------------------------------------------------------
// Moment sequences

/// Per-k PSD status of the Hankel matrices H_k = (s_{i+j})_{0<=i,j<=k}, with
/// tolerance λ_min >= -1e-12·max|s|.
inline std::vector<bool> hankel_psd_profile(std::span<const double> s) {
  std::vector<bool> out;
  if (s.empty()) return out;
  double smax = 0.0;
  for (double v : s) smax = std::max(smax, std::abs(v));
  const auto d = static_cast<Index>((s.size() - 1) / 2);
  for (Index k = 0; k <= d; ++k) {
    Eigen::MatrixXd h(k + 1, k + 1);
    for (Index i = 0; i <= k; ++i)
      for (Index j = 0; j <= k; ++j) h(i, j) = s[static_cast<std::size_t>(i + j)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
    out.push_back(es.eigenvalues()(0) >= -1e-12 * smax);
  }
  return out;
}

/// Moments s_0 … s_{2d} of a positive measure on ℝ.
class MomentSequence {
 public:
  explicit MomentSequence(std::vector<double> s) : s_(std::move(s)) {
    if (s_.empty() || s_.size() % 2 == 0) {
      throw ValidationError("MomentSequence: need an odd number of moments s_0..s_{2d}");
    }
    for (double v : s_)
      if (!std::isfinite(v)) throw ValidationError("MomentSequence: non-finite moment");
    if (s_[0] <= 0.0) throw ValidationError("MomentSequence: s_0 must be positive");
    const auto profile = hankel_psd_profile(s_);
    for (std::size_t k = 0; k < profile.size(); ++k) {
      if (!profile[k]) throw ValidationError("MomentSequence: Hankel matrix H_" + std::to_string(k) + " is not PSD");
    }
  }

  /// d, where the sequence is s_0 … s_{2d}.
  Index degree() const noexcept { return static_cast<Index>((s_.size() - 1) / 2); }
  const std::vector<double>& values() const noexcept { return s_; }
  double operator[](std::size_t n) const { return s_.at(n); }

 private:
  std::vector<double> s_;
};

inline HermitianMatrix hankel(const MomentSequence& m, Index k) {
  if (k < 0 || k > m.degree()) {
    throw ValidationError("hankel: k=" + std::to_string(k) + " exceeds degree " + std::to_string(m.degree()));
  }
  Matrix h(k + 1, k + 1);
  for (Index i = 0; i <= k; ++i)
    for (Index j = 0; j <= k; ++j) h(i, j) = m[static_cast<std::size_t>(i + j)];
  return HermitianMatrix(h);
}

/// Tridiagonal Jacobi matrix: diagonal a_0…a_{d-1}, off-diagonal b_1…b_{d-1}.
struct JacobiMatrix {
  std::vector<double> a;
  std::vector<double> b;

  Eigen::MatrixXd dense() const {
    const auto d = static_cast<Index>(a.size());
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(d, d);
    for (Index k = 0; k < d; ++k) j(k, k) = a[static_cast<std::size_t>(k)];
    for (Index k = 1; k < d; ++k) j(k, k - 1) = j(k - 1, k) = b[static_cast<std::size_t>(k - 1)];
    return j;
  }

  /// s'_n = s_0 ⟨Jⁿ e_0, e_0⟩ for n = 0..n_max.
  std::vector<double> reconstruct_moments(double s0, Index n_max) const {
    const Eigen::MatrixXd j = dense();
    Eigen::VectorXd v = Eigen::VectorXd::Zero(j.rows());
    v(0) = 1.0;
    std::vector<double> out;
    for (Index n = 0; n <= n_max; ++n) {
      out.push_back(s0 * v(0));
      v = j * v;
    }
    return out;
  }
};

/// Three-term recurrence coefficients of the orthonormal polynomials of the
/// moment functional, from the upper Cholesky factor of the Hankel matrix.
///
/// Only rows 0…d-1 of the factor of H_d are needed, so H_{d-1} must be
/// positive definite while H_d itself may be singular.
inline JacobiMatrix jacobi_from_moments(const MomentSequence& m) {
  const Index d = m.degree();
  if (d < 1) throw ValidationError("jacobi_from_moments: need at least s_0, s_1, s_2");
  double smax = 0.0;
  for (double v : m.values()) smax = std::max(smax, std::abs(v));
  const double pd_tol = 1e-12 * smax;
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(d, d + 1);
  auto s = [&](Index n) { return m[static_cast<std::size_t>(n)]; };
  for (Index k = 0; k < d; ++k) {
    double pivot = s(2 * k);
    for (Index i = 0; i < k; ++i) pivot -= r(i, k) * r(i, k);
    if (pivot <= pd_tol) {
      throw ValidationError("jacobi_from_moments: Hankel matrix singular; measure supported on < " +
                            std::to_string(d) + " points (detected rank " + std::to_string(k) + ")");
    }
    r(k, k) = std::sqrt(pivot);
    for (Index j = k + 1; j <= d; ++j) {
      double acc = s(k + j);
      for (Index i = 0; i < k; ++i) acc -= r(i, k) * r(i, j);
      r(k, j) = acc / r(k, k);
    }
  }
  JacobiMatrix out;
  for (Index k = 0; k < d; ++k) {
    double ak = r(k, k + 1) / r(k, k);
    if (k > 0) ak -= r(k - 1, k) / r(k - 1, k - 1);
    out.a.push_back(ak);
  }
  for (Index k = 1; k < d; ++k) out.b.push_back(r(k, k) / r(k - 1, k - 1));
  return out;
}

struct AnalyticVectorReport {
  std::vector<int> n;          ///< indices checked, 1…⌊(len-1)/2⌋
  std::vector<bool> holds;     ///< s_{2n}^{1/2} <= Mⁿ n!
  bool verdict = true;         ///< all hold
};

/// Checks the analytic-vector bound s_{2n}^{1/2} <= Mⁿ n! for every even
/// moment present. Evaluated in log space.
inline AnalyticVectorReport analytic_vector_check(std::span<const double> s, double m_const) {
  if (!(m_const > 0.0)) throw ValidationError("analytic_vector_check: M must be positive");
  AnalyticVectorReport out;
  for (std::size_t n = 1; 2 * n < s.size(); ++n) {
    const double s2n = s[2 * n];
    bool ok;
    if (s2n < 0.0) {
      ok = false;
    } else if (s2n == 0.0) {
      ok = true;
    } else {
      const double lhs = 0.5 * std::log(s2n);
      const double rhs = static_cast<double>(n) * std::log(m_const) + std::lgamma(static_cast<double>(n) + 1.0);
      ok = lhs <= rhs + 1e-12 * std::max(1.0, std::abs(rhs));
    }
    out.n.push_back(static_cast<int>(n));
    out.holds.push_back(ok);
    out.verdict = out.verdict && ok;
  }
  return out;
}

inline AnalyticVectorReport analytic_vector_check(const MomentSequence& m, double m_const) {
  return analytic_vector_check(std::span<const double>(m.values()), m_const);
}

}  // namespace transit
