#include "uk/linalg.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "uk/pauli.hpp"
#include "uk/random.hpp"

using namespace uk;

namespace {

const ComplexScalar I(0, 1);
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void expect_matrix_near(const ComplexMatrix& actual, const ComplexMatrix& expected, double tol) {
  ASSERT_EQ(actual.rows(), expected.rows());
  ASSERT_EQ(actual.cols(), expected.cols());
  EXPECT_LE(max_abs(ComplexMatrix(actual - expected)), tol) << actual << "\nvs\n" << expected;
}

}  // namespace

TEST(StateVector, NormalizesOnConstruction) {
  const StateVector psi{3.0, ComplexScalar(0, 4)};
  EXPECT_NEAR(psi.amplitudes().norm(), 1.0, 1e-15);
  EXPECT_NEAR(psi[0].real(), 0.6, 1e-15);
  EXPECT_NEAR(psi[1].imag(), 0.8, 1e-15);
}

TEST(StateVector, RejectsZeroAndNonFinite) {
  EXPECT_THROW(StateVector({0.0, 1e-11}), ZeroVector);
  EXPECT_THROW(StateVector({std::nan(""), 1.0}), NonFinite);
  EXPECT_THROW(StateVector(ComplexVector(0)), DimensionMismatch);
}

TEST(HermitianOperator, RejectsNonHermitianAndNonSquare) {
  ComplexMatrix m = pauli_x();
  m(0, 1) += 1e-9;
  EXPECT_THROW(HermitianOperator{m}, NotHermitian);
  EXPECT_THROW(HermitianOperator{ComplexMatrix(2, 3)}, DimensionMismatch);
  EXPECT_THROW(HermitianOperator{commutator(pauli_x(), pauli_y())}, NotHermitian);
}

TEST(HermitianOperator, SymmetrizeIsExplicitOptIn) {
  ComplexMatrix m = pauli_x();
  m(0, 1) += 1e-6;
  const HermitianOperator h = HermitianOperator::symmetrized(m);
  EXPECT_EQ(hermiticity_defect(h.matrix()), 0.0);
  EXPECT_NEAR(h.matrix()(0, 1).real(), 1.0 + 5e-7, 1e-15);
}

TEST(InnerProduct, BasisStates) {
  EXPECT_EQ(inner_product(up_z(), up_z()), ComplexScalar(1));
  EXPECT_EQ(inner_product(up_z(), down_z()), ComplexScalar(0));
}

TEST(InnerProduct, ConjugatesLeftSlot) {
  const StateVector a{1.0, I};
  const StateVector b{1.0, 0.0};
  const ComplexScalar ab = inner_product(a, b);
  EXPECT_NEAR(ab.real(), 0.70710678118654752, 1e-15);
  EXPECT_NEAR(ab.imag(), 0.0, 1e-15);
  // conj(i/√2)·1 = -i/√2
  const ComplexScalar a_down = inner_product(a, down_z());
  EXPECT_NEAR(a_down.imag(), -kInvSqrt2, 1e-15);
}

TEST(InnerProduct, DimensionMismatchThrows) {
  EXPECT_THROW(inner_product(up_z(), StateVector::basis(3, 0)), DimensionMismatch);
}

TEST(Apply, PauliOnUpZ) {
  const ComplexVector sx_up = apply(sigma_x(), up_z());
  EXPECT_EQ(sx_up, down_z().amplitudes());
  const ComplexVector sy_up = apply(sigma_y(), up_z());
  EXPECT_EQ(sy_up(0), ComplexScalar(0));
  EXPECT_EQ(sy_up(1), I);
}

TEST(Apply, IdentityAndMismatch) {
  Rng rng = make_rng(3);
  const StateVector psi = random_state(5, rng);
  EXPECT_EQ(uk::apply(ComplexMatrix(ComplexMatrix::Identity(5, 5)), psi), psi.amplitudes());
  EXPECT_THROW(apply(sigma_x(), psi), DimensionMismatch);
}

TEST(Expectation, PauliExamples) {
  EXPECT_EQ(expectation(sigma_z(), up_z()), 1.0);
  EXPECT_EQ(expectation(sigma_x(), up_z()), 0.0);
  EXPECT_NEAR(expectation(sigma_z(), StateVector{1.0, 1.0}), 0.0, 1e-15);
}

TEST(Commutator, PauliAlgebra) {
  expect_matrix_near(commutator(pauli_x(), pauli_y()), 2.0 * I * pauli_z(), 0);
  expect_matrix_near(commutator(pauli_x(), pauli_x()), ComplexMatrix::Zero(2, 2), 0);
  expect_matrix_near(anticommutator(pauli_x(), pauli_y()), ComplexMatrix::Zero(2, 2), 0);
  EXPECT_THROW(commutator(pauli_x(), ComplexMatrix(ComplexMatrix::Identity(3, 3))),
               DimensionMismatch);
}

TEST(Commutator, AdjointSymmetryForRandomHermitianPairs) {
  Rng rng = make_rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = 2 + trial % 11;
    const HermitianOperator a = random_hermitian(d, rng);
    const HermitianOperator b = random_hermitian(d, rng);
    const ComplexMatrix c = commutator(a, b);
    const ComplexMatrix ac = anticommutator(a, b);
    EXPECT_LE(max_abs(ComplexMatrix(c.adjoint() + c)), 1e-12);
    EXPECT_LE(max_abs(ComplexMatrix(ac.adjoint() - ac)), 1e-12);
  }
}

TEST(Eigh, SigmaZ) {
  const auto eig = eigh(sigma_z());
  EXPECT_EQ(eig.eigenvalues(0), -1.0);
  EXPECT_EQ(eig.eigenvalues(1), 1.0);
  EXPECT_NEAR(std::abs(inner_product(eig.eigenvector(0), down_z())), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(inner_product(eig.eigenvector(1), up_z())), 1.0, 1e-14);
}

TEST(Eigh, SigmaXUpToPhase) {
  const auto eig = eigh(sigma_x());
  EXPECT_NEAR(eig.eigenvalues(0), -1.0, 1e-14);
  EXPECT_NEAR(eig.eigenvalues(1), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(inner_product(eig.eigenvector(0), StateVector{1.0, -1.0})), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(inner_product(eig.eigenvector(1), StateVector{1.0, 1.0})), 1.0, 1e-14);
}

TEST(Eigh, DegenerateIdentityOnlyChecksResidual) {
  const HermitianOperator id(ComplexMatrix::Identity(3, 3));
  const auto eig = eigh(id);
  for (Index k = 0; k < 3; ++k) {
    EXPECT_NEAR(eig.eigenvalues(k), 1.0, 1e-14);
    const ComplexVector v = eig.eigenvectors.col(k);
    EXPECT_LE((id.matrix() * v - v).norm(), 1e-10);
  }
  EXPECT_LE(max_abs(ComplexMatrix(eig.eigenvectors.adjoint() * eig.eigenvectors -
                                  ComplexMatrix::Identity(3, 3))),
            1e-10);
}

TEST(Eigh, RandomMatricesReconstructAndMatchEigen) {
  Rng rng = make_rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const Index d = 2 + trial % 11;
    const HermitianOperator a = random_hermitian(d, rng);
    const auto eig = eigh(a);

    const ComplexMatrix rebuilt = eig.eigenvectors *
                                  eig.eigenvalues.cast<ComplexScalar>().asDiagonal() *
                                  eig.eigenvectors.adjoint();
    EXPECT_LE(max_abs(ComplexMatrix(rebuilt - a.matrix())), 1e-9);

    const Eigen::VectorXd reference = oracle::spectrum(a.matrix());
    EXPECT_LE((eig.eigenvalues - reference).cwiseAbs().maxCoeff(), 1e-10);

    for (Index k = 0; k < d; ++k) {
      const ComplexVector v = eig.eigenvectors.col(k);
      EXPECT_LE((a.matrix() * v - eig.eigenvalues(k) * v).norm(), 1e-10);
      EXPECT_NEAR(expectation(a, eig.eigenvector(k)), eig.eigenvalues(k), 1e-9);
    }
    const ComplexMatrix gram = eig.eigenvectors.adjoint() * eig.eigenvectors;
    EXPECT_LE(max_abs(ComplexMatrix(gram - ComplexMatrix::Identity(d, d))), 1e-10);
    for (Index k = 1; k < d; ++k) EXPECT_LE(eig.eigenvalues(k - 1), eig.eigenvalues(k));
  }
}

TEST(Eigh, SixtyFourDimensional) {
  Rng rng = make_rng(64);
  const HermitianOperator a = random_hermitian(64, rng);
  const auto eig = eigh(a);
  EXPECT_LE((eig.eigenvalues - oracle::spectrum(a.matrix())).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Eigh, ReportsNonConvergence) {
  Rng rng = make_rng(5);
  const HermitianOperator a = random_hermitian(6, rng);
  EXPECT_THROW(eigh(a, 1e-14, 0), ConvergenceError);
}

TEST(Eigh, LongDoubleInstantiation) {
  Rng rng = make_rng(9);
  const Hermitian<long double> a = random_hermitian<long double>(5, rng);
  const auto eig = eigh(a, 1e-18L);
  const Matrix<long double> rebuilt =
      eig.eigenvectors * eig.eigenvalues.cast<Complex<long double>>().asDiagonal() *
      eig.eigenvectors.adjoint();
  EXPECT_LE(static_cast<double>(max_abs(Matrix<long double>(rebuilt - a.matrix()))), 1e-15);
}

TEST(InnerProduct, ConjugateSymmetryProperty) {
  Rng rng = make_rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const Index d = 2 + trial % 11;
    const StateVector a = random_state(d, rng);
    const StateVector b = random_state(d, rng);
    EXPECT_LE(std::abs(inner_product(a, b) - std::conj(inner_product(b, a))), 1e-15);
  }
}
