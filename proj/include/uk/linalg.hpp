#pragma once

// Dense complex linear algebra for finite-dimensional observables: normalized
// states, Hermitian operators, expectation values, (anti)commutators and a
// cyclic Jacobi eigensolver. Everything is templated on the real scalar type;
// the default tolerances are tuned for double.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "uk/errors.hpp"

namespace uk {

using Index = Eigen::Index;

template <typename Real>
using Complex = std::complex<Real>;
template <typename Real>
using Vector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using Matrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kZeroNormTol = 1e-10;
inline constexpr double kJacobiThreshold = 1e-14;
inline constexpr int kJacobiMaxSweeps = 100;

namespace detail {

inline void require_same_dim(Index a, Index b, const char* what) {
  if (a != b) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw DimensionMismatch(msg.str());
  }
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (!m.allFinite()) throw NonFinite(std::string(what) + ": non-finite entry");
}

}  // namespace detail

/// Largest entry modulus, ‖A‖_max.
template <typename Derived>
auto max_abs(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  return m.size() == 0 ? Real(0) : m.cwiseAbs().maxCoeff();
}

/// max_jk |m(j,k) - conj(m(k,j))|
template <typename Derived>
auto hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  return max_abs(m - m.adjoint());
}

/// A unit vector. Construction normalizes; vectors shorter than 1e-10 are
/// rejected as zero.
template <typename Real>
class State {
 public:
  explicit State(Vector<Real> amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.size() == 0) throw DimensionMismatch("state: empty vector");
    detail::require_finite(amps_, "state");
    const Real norm = amps_.norm();
    if (norm < Real(kZeroNormTol)) throw ZeroVector("state: vector norm below 1e-10");
    amps_ /= norm;
  }

  State(std::initializer_list<Complex<Real>> amplitudes)
      : State(Vector<Real>::Map(amplitudes.begin(), Index(amplitudes.size()))) {}

  /// Normalizes a residual whose norm the caller has already computed and
  /// checked against its own (possibly smaller) zero threshold.
  static State from_direction(const Vector<Real>& v, Real norm) {
    if (!(norm > Real(0))) throw ZeroVector("state: zero direction");
    State s;
    s.amps_ = v / norm;
    detail::require_finite(s.amps_, "state");
    return s;
  }

  static State basis(Index dim, Index k) {
    Vector<Real> v = Vector<Real>::Zero(dim);
    v(k) = Real(1);
    return State(std::move(v));
  }

  Index dim() const { return amps_.size(); }
  const Vector<Real>& amplitudes() const { return amps_; }
  Complex<Real> operator[](Index k) const { return amps_(k); }

  /// e^{iθ}|ψ⟩
  State phased(Real theta) const {
    State s;
    s.amps_ = amps_ * std::polar(Real(1), theta);
    return s;
  }

 private:
  State() = default;
  Vector<Real> amps_;
};

/// A square matrix with A = A† to within 1e-12 per entry.
template <typename Real>
class Hermitian {
 public:
  explicit Hermitian(Matrix<Real> m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) {
      std::ostringstream msg;
      msg << "operator must be square and non-empty (got " << m_.rows() << "x"
          << m_.cols() << ")";
      throw DimensionMismatch(msg.str());
    }
    detail::require_finite(m_, "operator");
    const Real defect = hermiticity_defect(m_);
    if (defect > Real(kHermitianTol)) {
      std::ostringstream msg;
      msg << "operator is not Hermitian (max |A - A^dagger| = " << defect << ")";
      throw NotHermitian(msg.str());
    }
  }

  /// (A + A†)/2. Callers opt into the repair explicitly.
  static Hermitian symmetrized(const Matrix<Real>& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("symmetrize: matrix not square");
    return Hermitian(Matrix<Real>((m + m.adjoint()) / Real(2)));
  }

  Index dim() const { return m_.rows(); }
  const Matrix<Real>& matrix() const { return m_; }
  Real max_abs() const { return uk::max_abs(m_); }

 private:
  Matrix<Real> m_;
};

using ComplexScalar = Complex<double>;
using ComplexVector = Vector<double>;
using ComplexMatrix = Matrix<double>;
using Operator = ComplexMatrix;
using StateVector = State<double>;
using HermitianOperator = Hermitian<double>;

/// ⟨a|b⟩, conjugate-linear in the first slot.
template <typename DA, typename DB>
auto inner_product(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  detail::require_same_dim(a.size(), b.size(), "inner_product");
  return a.dot(b);
}

template <typename Real>
Complex<Real> inner_product(const State<Real>& a, const State<Real>& b) {
  return inner_product(a.amplitudes(), b.amplitudes());
}

/// A|ψ⟩, unnormalized.
template <typename Real>
Vector<Real> apply(const Matrix<Real>& op, const State<Real>& psi) {
  detail::require_same_dim(op.cols(), psi.dim(), "apply");
  return op * psi.amplitudes();
}

template <typename Real>
Vector<Real> apply(const Hermitian<Real>& op, const State<Real>& psi) {
  return apply(op.matrix(), psi);
}

/// ⟨bra|M|ket⟩ for a general (not necessarily Hermitian) operator.
template <typename Real>
Complex<Real> braket(const State<Real>& bra, const Matrix<Real>& op, const State<Real>& ket) {
  detail::require_same_dim(op.rows(), bra.dim(), "braket");
  return bra.amplitudes().dot(apply(op, ket));
}

/// ⟨ψ|A|ψ⟩. The imaginary part is checked against 1e-12·(1 + ‖A‖_max) before
/// being discarded.
template <typename Real>
Real expectation(const Hermitian<Real>& op, const State<Real>& psi) {
  const Complex<Real> value = braket(psi, op.matrix(), psi);
  const Real tol = Real(kHermitianTol) * (Real(1) + op.max_abs());
  if (std::abs(value.imag()) > tol) {
    std::ostringstream msg;
    msg << "expectation: imaginary part " << value.imag() << " exceeds tolerance";
    throw IdentityViolation(msg.str());
  }
  return value.real();
}

template <typename Real>
Matrix<Real> commutator(const Matrix<Real>& a, const Matrix<Real>& b) {
  detail::require_same_dim(a.rows(), b.rows(), "commutator");
  detail::require_same_dim(a.cols(), b.cols(), "commutator");
  return a * b - b * a;
}

template <typename Real>
Matrix<Real> anticommutator(const Matrix<Real>& a, const Matrix<Real>& b) {
  detail::require_same_dim(a.rows(), b.rows(), "anticommutator");
  detail::require_same_dim(a.cols(), b.cols(), "anticommutator");
  return a * b + b * a;
}

template <typename Real>
Matrix<Real> commutator(const Hermitian<Real>& a, const Hermitian<Real>& b) {
  return commutator(a.matrix(), b.matrix());
}

template <typename Real>
Matrix<Real> anticommutator(const Hermitian<Real>& a, const Hermitian<Real>& b) {
  return anticommutator(a.matrix(), b.matrix());
}

/// Eigenvalues ascending; column k of `eigenvectors` pairs with eigenvalue k.
template <typename Real>
struct EigenDecomposition {
  RealVector<Real> eigenvalues;
  Matrix<Real> eigenvectors;

  Index size() const { return eigenvalues.size(); }
  State<Real> eigenvector(Index k) const { return State<Real>(eigenvectors.col(k)); }
  Real lowest() const { return eigenvalues(0); }
  Real highest() const { return eigenvalues(size() - 1); }
};

namespace detail {

template <typename Real>
Real off_diagonal_norm(const Matrix<Real>& a) {
  Real sum = 0;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (i != j) sum += std::norm(a(i, j));
  return std::sqrt(sum);
}

}  // namespace detail

/// Full spectrum of a Hermitian matrix by cyclic Jacobi sweeps. Each (p,q)
/// rotation first removes the phase of a_pq, then applies the real symmetric
/// Jacobi rotation that annihilates it. Stops once the off-diagonal Frobenius
/// norm drops below threshold·max(1, ‖A‖_F).
template <typename Real>
EigenDecomposition<Real> eigh(const Hermitian<Real>& op,
                              Real threshold = Real(kJacobiThreshold),
                              int max_sweeps = kJacobiMaxSweeps) {
  using C = Complex<Real>;
  Matrix<Real> a = op.matrix();
  const Index n = a.rows();
  Matrix<Real> v = Matrix<Real>::Identity(n, n);
  const Real target = threshold * std::max(Real(1), a.norm());

  int sweep = 0;
  while (detail::off_diagonal_norm(a) > target) {
    if (sweep++ == max_sweeps) {
      throw ConvergenceError("eigh: no convergence after " + std::to_string(max_sweeps) +
                             " sweeps");
    }
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const C apq = a(p, q);
        const Real mag = std::abs(apq);
        if (mag == Real(0)) continue;
        const C unphase = std::conj(apq / mag);
        const Real theta = (a(q, q).real() - a(p, p).real()) / (Real(2) * mag);
        Real t = Real(1) / (std::abs(theta) + std::sqrt(theta * theta + Real(1)));
        if (theta < 0) t = -t;
        const Real c = Real(1) / std::sqrt(t * t + Real(1));
        const Real s = t * c;

        // Unitary acting on columns p, q.
        const C jpp = c, jpq = s, jqp = -s * unphase, jqq = c * unphase;

        for (Index k = 0; k < n; ++k) {
          const C akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (Index k = 0; k < n; ++k) {
          const C apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        for (Index k = 0; k < n; ++k) {
          const C vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
        a(p, q) = a(q, p) = C(0);
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return a(i, i).real() < a(j, j).real(); });

  EigenDecomposition<Real> out{RealVector<Real>(n), Matrix<Real>(n, n)};
  for (Index k = 0; k < n; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    out.eigenvalues(k) = a(src, src).real();
    out.eigenvectors.col(k) = v.col(src);
  }
  return out;
}

}  // namespace uk
