#include <gtest/gtest.h>

#include "transit/instances.hpp"
#include "transit/linalg.hpp"

using namespace transit;

namespace {

Matrix diag(std::initializer_list<double> d) {
  RealVector v(static_cast<Index>(d.size()));
  Index i = 0;
  for (double x : d) v(i++) = x;
  return v.cast<Complex>().asDiagonal();
}

}  // namespace

TEST(Eigh, DiagonalSortsAscending) {
  const auto e = eigh(HermitianMatrix(diag({3, 1})));
  EXPECT_NEAR(e.values(0), 1.0, 1e-15);
  EXPECT_NEAR(e.values(1), 3.0, 1e-15);
  EXPECT_NEAR(std::abs(e.vectors(1, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(e.vectors(0, 1)), 1.0, 1e-15);
}

TEST(Eigh, Identity) {
  const auto e = eigh(HermitianMatrix::identity(5));
  for (Index i = 0; i < 5; ++i) EXPECT_NEAR(e.values(i), 1.0, 1e-15);
}

TEST(Eigh, ReconstructsRandomHermitian) {
  Rng rng(11);
  for (Index n : {1, 3, 7, 12}) {
    const auto a = random_hermitian(n, rng);
    const auto e = eigh(a);
    const Matrix back = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    EXPECT_LE(max_abs(back - a.matrix()), 1e-10);
    EXPECT_LE(max_abs(e.vectors.adjoint() * e.vectors - Matrix::Identity(n, n)), 1e-10);
  }
}

TEST(Eigh, PlantedSpectrum) {
  Rng rng(12);
  const RealVector spec = (RealVector(6) << -2.5, -1, 0, 0.5, 0.5, 4).finished();
  const Matrix u = random_unitary(6, rng);
  const auto e = eigh(HermitianMatrix(u * spec.cast<Complex>().asDiagonal() * u.adjoint()));
  EXPECT_LE((e.values - spec).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Eigh, RejectsNonSquare) { EXPECT_THROW(HermitianMatrix(Matrix::Zero(2, 3)), ValidationError); }

TEST(Hermitian, SymmetrizesOnConstruction) {
  Matrix a(2, 2);
  a << 1, Complex(0, 1), 0, 2;
  const HermitianMatrix h(a);
  EXPECT_LE(max_abs(h.matrix() - h.matrix().adjoint()), 0.0);
  EXPECT_NEAR(std::imag(h.matrix()(0, 1)), 0.5, 1e-15);
}

TEST(PsdSqrt, Diagonal) { EXPECT_LE(max_abs(psd_sqrt(HermitianMatrix(diag({4, 9}))).matrix() - diag({2, 3})), 1e-14); }

TEST(PsdSqrt, Zero) { EXPECT_LE(max_abs(psd_sqrt(HermitianMatrix(Matrix::Zero(3, 3))).matrix()), 0.0); }

TEST(PsdSqrt, SquaresBack) {
  Rng rng(13);
  for (Index n : {2, 5, 9}) {
    const auto p = random_density(n, rng);
    const Matrix r = psd_sqrt(p).matrix();
    EXPECT_LE((r * r - p.matrix()).norm(), 1e-9 * p.matrix().norm());
    EXPECT_TRUE(is_psd(HermitianMatrix(r)));
  }
}

TEST(PsdSqrt, ClampsRoundingButRejectsNegative) {
  EXPECT_NO_THROW(psd_sqrt(HermitianMatrix(diag({1, -1e-12}))));
  EXPECT_THROW(psd_sqrt(HermitianMatrix(diag({1, -1e-3}))), ValidationError);
}

TEST(PsdSqrt, UnitaryCovariance) {
  Rng rng(14);
  const auto p = random_density(5, rng);
  const Matrix u = random_unitary(5, rng);
  const Matrix lhs = psd_sqrt(HermitianMatrix(u * p.matrix() * u.adjoint())).matrix();
  const Matrix rhs = u * psd_sqrt(p).matrix() * u.adjoint();
  EXPECT_LE(max_abs(lhs - rhs), 1e-9);
}

TEST(TraceNorm, Diagonal) { EXPECT_NEAR(trace_norm(diag({1, -2})), 3.0, 1e-14); }

TEST(TraceNorm, RankOne) {
  Rng rng(15);
  const Vector u = random_unit_vector(4, rng), v = random_unit_vector(4, rng);
  EXPECT_NEAR(trace_norm(u * v.adjoint()), 1.0, 1e-13);
}

TEST(TraceNorm, MatchesPolarOracle) {
  Rng rng(16);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix a = random_ginibre(5, 5, rng);
    // polar decomposition a = W P from the Hermitian square root of a†a
    const Matrix p = psd_sqrt(HermitianMatrix(a.adjoint() * a)).matrix();
    const Matrix w = a * p.inverse();
    EXPECT_NEAR(std::abs((w.adjoint() * a).trace()), trace_norm(a), 1e-9);
    EXPECT_NEAR(std::abs((trace_norm_maximizer(a) * a).trace()), trace_norm(a), 1e-9);
    for (int k = 0; k < 10; ++k) {
      EXPECT_LE(std::abs((random_unitary(5, rng) * a).trace()), trace_norm(a) + 1e-12);
    }
  }
}

TEST(TraceNorm, DominatesTraceAndOpNorm) {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = random_ginibre(4, 4, rng);
    EXPECT_GE(trace_norm(a) + 1e-12, std::abs(a.trace()));
    EXPECT_GE(trace_norm(a) + 1e-12, op_norm(a));
  }
}

TEST(PartialTrace, ProductState) {
  Rng rng(18);
  const Matrix a = random_ginibre(2, 2, rng), b = random_ginibre(3, 3, rng);
  EXPECT_LE(max_abs(partial_trace(kron(a, b), 2, 3, Factor::B) - b.trace() * a), 1e-13);
  EXPECT_LE(max_abs(partial_trace(kron(a, b), 2, 3, Factor::A) - a.trace() * b), 1e-13);
}

TEST(PartialTrace, Identity) {
  EXPECT_LE(max_abs(partial_trace(Matrix::Identity(6, 6), 2, 3, Factor::B) - 3.0 * Matrix::Identity(2, 2)), 0.0);
}

TEST(PartialTrace, PairingIdentity) {
  Rng rng(19);
  const Matrix x = random_ginibre(12, 12, rng);
  const Matrix px = partial_trace(x, 3, 4, Factor::B);
  for (int k = 0; k < 20; ++k) {
    const Matrix y = random_ginibre(3, 3, rng);
    EXPECT_LE(std::abs((kron(y, Matrix::Identity(4, 4)) * x).trace() - (y * px).trace()), 1e-10);
  }
  EXPECT_LE(std::abs(px.trace() - x.trace()), 1e-12);
  EXPECT_LE(std::abs(partial_trace(x, 3, 4, Factor::A).trace() - x.trace()), 1e-12);
}

TEST(PartialTrace, ShapeMismatch) { EXPECT_THROW(partial_trace(Matrix::Zero(5, 5), 2, 3, Factor::B), ValidationError); }

TEST(Small, InnerNormKron) {
  EXPECT_NEAR(std::abs(hs_inner(Matrix::Identity(2, 2), Matrix::Identity(2, 2)) - Complex(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(op_norm(diag({1, -3})), 3.0, 1e-14);
  EXPECT_LE(max_abs(kron(diag({1, 2}), Matrix::Identity(2, 2)) - diag({1, 1, 2, 2})), 0.0);
  Matrix a = Matrix::Zero(2, 2);
  a(0, 1) = kI;
  EXPECT_NEAR(std::abs(hs_inner(a, Matrix(kI * a)) - Complex(0, 1)), 0.0, 1e-15);
  EXPECT_THROW(hs_inner(Matrix::Zero(2, 2), Matrix::Zero(3, 3)), ValidationError);
}
