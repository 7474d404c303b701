#pragma once

// Finite-dimensional *-representations given by generator matrices, the
// operator subspaces they span, and positive functionals on them.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "transit/linalg.hpp"

namespace transit {

/// A *-representation on ℂ^dim given by named generator matrices. The unit is
/// implicit and adjoints of the generators are adjoined automatically, so the
/// represented algebra is always *-closed.
class Representation {
 public:
  Representation() = default;

  Representation(Index dim, std::map<std::string, Matrix> generators)
      : dim_(dim), generators_(std::move(generators)) {
    if (dim_ <= 0) throw ValidationError("Representation: dim must be positive");
    for (const auto& [name, g] : generators_) {
      if (g.rows() != dim_ || g.cols() != dim_) {
        throw ValidationError("Representation: generator '" + name + "' is " +
                              std::to_string(g.rows()) + "x" + std::to_string(g.cols()) +
                              ", expected " + std::to_string(dim_) + "x" + std::to_string(dim_));
      }
      if (!all_finite(g)) throw ValidationError("Representation: generator '" + name + "' has non-finite entries");
    }
  }

  Index dim() const noexcept { return dim_; }
  const std::map<std::string, Matrix>& generators() const noexcept { return generators_; }

  /// Generators in name order followed by the adjoint of each non-Hermitian one.
  std::vector<Matrix> star_generators() const {
    std::vector<Matrix> out;
    for (const auto& [name, g] : generators_) out.push_back(g);
    for (const auto& [name, g] : generators_) {
      if (max_abs(g - g.adjoint()) > 1e-14 * std::max(1.0, max_abs(g))) out.push_back(g.adjoint());
    }
    return out;
  }

 private:
  Index dim_ = 0;
  std::map<std::string, Matrix> generators_;
};

/// Irreducible representation of the full matrix algebra M_n, generated by
/// the clock diag(0,…,n-1) and the cyclic shift.
inline Representation full_matrix_algebra(Index n) {
  if (n <= 0) throw ValidationError("full_matrix_algebra: n must be positive");
  std::map<std::string, Matrix> gens;
  if (n > 1) {
    Matrix clock = Matrix::Zero(n, n);
    Matrix shift = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
      clock(i, i) = static_cast<double>(i);
      shift((i + 1) % n, i) = 1.0;
    }
    gens.emplace("clock", std::move(clock));
    gens.emplace("shift", std::move(shift));
  }
  return Representation(n, std::move(gens));
}

/// Subspace of operators on ℂ^dim with an HS-orthonormal basis.
class OperatorSubspace {
 public:
  OperatorSubspace() = default;
  OperatorSubspace(Index ambient_dim, std::vector<Matrix> basis)
      : ambient_(ambient_dim), basis_(std::move(basis)) {}

  Index ambient_dim() const noexcept { return ambient_; }
  std::size_t dimension() const noexcept { return basis_.size(); }
  const std::vector<Matrix>& basis() const noexcept { return basis_; }

  /// HS-orthogonal projection onto the subspace.
  Matrix project(const Matrix& x) const {
    Matrix out = Matrix::Zero(ambient_, ambient_);
    for (const auto& b : basis_) out += hs_inner(b, x) * b;
    return out;
  }

  /// ‖x − P(x)‖_F.
  double residual(const Matrix& x) const { return (x - project(x)).norm(); }

  /// max |⟨b_i, b_j⟩ − δ_ij|.
  double orthonormality_error() const {
    double err = 0.0;
    for (std::size_t i = 0; i < basis_.size(); ++i)
      for (std::size_t j = i; j < basis_.size(); ++j)
        err = std::max(err, std::abs(hs_inner(basis_[i], basis_[j]) - (i == j ? 1.0 : 0.0)));
    return err;
  }

 private:
  Index ambient_ = 0;
  std::vector<Matrix> basis_;
};

/// Incremental Gram–Schmidt in HS space. A candidate is dropped when its
/// residual falls below drop_tol times the largest norm seen (candidates or
/// the optional reference scale).
class HsGramSchmidt {
 public:
  explicit HsGramSchmidt(double drop_tol = 1e-10, double reference_norm = 0.0)
      : drop_tol_(drop_tol), max_norm_(reference_norm) {}

  bool add(const Matrix& candidate) {
    const double norm = candidate.norm();
    max_norm_ = std::max(max_norm_, norm);
    if (norm == 0.0) return false;
    Matrix r = candidate;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis_) r -= hs_inner(b, r) * b;
    const double rn = r.norm();
    if (rn <= drop_tol_ * max_norm_) return false;
    basis_.push_back(r / rn);
    return true;
  }

  const std::vector<Matrix>& basis() const noexcept { return basis_; }
  std::vector<Matrix> take() && { return std::move(basis_); }

 private:
  double drop_tol_;
  double max_norm_;
  std::vector<Matrix> basis_;
};

/// Orthonormal basis of the subspace spanned by `spanning`.
inline OperatorSubspace span_of(Index dim, const std::vector<Matrix>& spanning, double drop_tol = 1e-10) {
  HsGramSchmidt gs(drop_tol);
  for (const auto& m : spanning) gs.add(m);
  return OperatorSubspace(dim, std::move(gs).take());
}

using AlgebraBasis = OperatorSubspace;

/// Materialize the represented algebra π(A) as an HS-orthonormal basis.
///
/// Words are grown breadth-first by left multiplication with the *-closed
/// generator list in deterministic order. The span is closed once a whole
/// length adds nothing new; if that has not happened by word length
/// `max_words`, the algebra is reported as not closed.
inline AlgebraBasis algebra_basis(const Representation& rep, int max_words) {
  if (max_words < 1) throw ValidationError("algebra_basis: max_words must be >= 1");
  const Index d = rep.dim();
  const auto gens = rep.star_generators();
  HsGramSchmidt gs(1e-10);
  gs.add(Matrix::Identity(d, d));
  std::vector<Matrix> frontier{gs.basis().front()};
  for (int length = 1; length <= max_words; ++length) {
    std::vector<Matrix> next;
    for (const auto& w : frontier) {
      for (const auto& g : gens) {
        if (gs.add(g * w)) next.push_back(gs.basis().back());
      }
    }
    if (next.empty()) return OperatorSubspace(d, gs.basis());
    frontier = std::move(next);
  }
  throw NumericalError("not-closed",
                       "algebra_basis: dimension did not stabilize within word length " +
                           std::to_string(max_words),
                       {{"dimension_reached", static_cast<double>(gs.basis().size())}});
}

/// Default word budget: an algebra on ℂ^d has dimension <= d², and every
/// productive length adds at least one element.
inline AlgebraBasis algebra_basis(const Representation& rep) {
  return algebra_basis(rep, static_cast<int>(rep.dim() * rep.dim()) + 1);
}

/// Largest ‖b_i b_j − P(b_i b_j)‖ and ‖b_i† − P(b_i†)‖ over basis pairs.
inline double closure_residual(const OperatorSubspace& s) {
  double r = 0.0;
  for (const auto& a : s.basis()) {
    r = std::max(r, s.residual(a.adjoint()));
    for (const auto& b : s.basis()) r = std::max(r, s.residual(a * b));
  }
  return r;
}

/// All words in the *-closed generators up to the given length (including the
/// empty word, the identity), breadth-first.
inline std::vector<Matrix> words(const Representation& rep, int max_length) {
  const Index d = rep.dim();
  const auto gens = rep.star_generators();
  std::vector<Matrix> out{Matrix::Identity(d, d)};
  std::vector<Matrix> layer{out.front()};
  for (int len = 1; len <= max_length; ++len) {
    std::vector<Matrix> next;
    for (const auto& w : layer)
      for (const auto& g : gens) next.push_back(g * w);
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

/// Positive linear functional on operators of ℂ^dim, either a vector
/// functional a ↦ ⟨aφ,φ⟩ or a trace functional a ↦ Tr(a t).
class Functional {
 public:
  enum class Kind { vector, trace };

  static Functional vector(Vector phi) {
    if (phi.size() == 0 || !phi.allFinite()) throw ValidationError("Functional: invalid vector");
    if (phi.norm() == 0.0) throw ValidationError("Functional: vector must be nonzero");
    Functional f;
    f.kind_ = Kind::vector;
    f.phi_ = std::move(phi);
    return f;
  }

  static Functional trace(HermitianMatrix t) {
    if (t.rows() == 0) throw ValidationError("Functional: empty density");
    if (!is_psd(t)) throw ValidationError("Functional: density is not positive semidefinite");
    Functional f;
    f.kind_ = Kind::trace;
    f.density_ = std::move(t);
    return f;
  }

  Kind kind() const noexcept { return kind_; }
  Index dim() const noexcept { return kind_ == Kind::vector ? phi_.size() : density_.rows(); }
  const Vector& vector_data() const { return phi_; }
  const HermitianMatrix& density() const { return density_; }

  /// f(1)
  double unit_value() const { return kind_ == Kind::vector ? phi_.squaredNorm() : density_.trace(); }

 private:
  Kind kind_ = Kind::vector;
  Vector phi_;
  HermitianMatrix density_;
};

inline Complex evaluate(const Functional& f, const Matrix& a) {
  if (a.rows() != f.dim() || a.cols() != f.dim()) {
    throw ValidationError("evaluate: operator is " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()) + ", functional lives on dim " + std::to_string(f.dim()));
  }
  if (f.kind() == Functional::Kind::vector) return f.vector_data().dot(a * f.vector_data());
  return (a.cwiseProduct(f.density().matrix().transpose())).sum();
}

/// Orthogonal direct sum ρ_1 ⊕ … ⊕ ρ_K with the block embeddings ι_k.
struct DirectSum {
  Representation rep;
  std::vector<Index> offsets;
  std::vector<Index> dims;

  Vector embed(std::size_t k, const Vector& v) const {
    if (k >= dims.size() || v.size() != dims[k]) throw ValidationError("DirectSum::embed: bad summand or size");
    Vector out = Vector::Zero(rep.dim());
    out.segment(offsets[k], dims[k]) = v;
    return out;
  }
};

inline DirectSum direct_sum(const std::vector<Representation>& reps) {
  if (reps.empty()) throw ValidationError("direct_sum: need at least one summand");
  const auto& names0 = reps.front().generators();
  DirectSum out;
  Index total = 0;
  for (const auto& r : reps) {
    if (r.generators().size() != names0.size()) throw ValidationError("direct_sum: generator name sets differ");
    for (const auto& [name, g] : r.generators()) {
      if (!names0.count(name)) throw ValidationError("direct_sum: generator name sets differ ('" + name + "')");
    }
    out.offsets.push_back(total);
    out.dims.push_back(r.dim());
    total += r.dim();
  }
  std::map<std::string, Matrix> gens;
  for (const auto& [name, g0] : names0) {
    Matrix g = Matrix::Zero(total, total);
    for (std::size_t k = 0; k < reps.size(); ++k) {
      g.block(out.offsets[k], out.offsets[k], out.dims[k], out.dims[k]) = reps[k].generators().at(name);
    }
    gens.emplace(name, std::move(g));
  }
  out.rep = Representation(total, std::move(gens));
  return out;
}

}  // namespace transit
