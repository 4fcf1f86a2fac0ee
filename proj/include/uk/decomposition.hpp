#pragma once

// Splitting A|ψ⟩ into its component along |ψ⟩ and an orthogonal remainder:
//
//   A|ψ⟩ = ⟨A⟩|ψ⟩ + ΔA|ψ⊥⟩,   ΔA = ‖(A - ⟨A⟩)|ψ⟩‖ ≥ 0.
//
// Taking ΔA real and nonnegative fixes the phase of |ψ⊥⟩ completely. Two
// operators therefore generally produce residual directions that differ by a
// phase even in two dimensions, which is what relative_phase measures.

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "uk/linalg.hpp"

namespace uk {

/// Spreads at or below this are treated as zero (ψ is an eigenstate).
template <typename Real>
Real spread_tolerance(const Hermitian<Real>& op) {
  return Real(1e-12) * (Real(1) + op.max_abs());
}

template <typename Real>
struct Decomposition {
  Real mean;
  Real spread;
  std::optional<State<Real>> perp;  // absent for eigenstates

  bool is_eigenstate() const { return !perp.has_value(); }
};

template <typename Real>
struct ChainResult {
  Real spread_psi;
  Real spread_perp;
  Complex<Real> overlap;  // ⟨ψ|ψ⊥⊥⟩
  State<Real> perp;
  State<Real> perp_perp;
};

template <typename Real>
struct PhaseResult {
  Real phi;  // [0, 2π)
  Real spread_a;
  Real spread_b;
};

template <typename Real>
Decomposition<Real> decompose(const Hermitian<Real>& op, const State<Real>& psi) {
  const Real mean = expectation(op, psi);
  const Vector<Real> residual = apply(op, psi) - mean * psi.amplitudes();
  const Real spread = residual.norm();
  if (spread <= spread_tolerance(op)) return {mean, spread, std::nullopt};
  return {mean, spread, State<Real>::from_direction(residual, spread)};
}

template <typename Real>
Real spread(const Hermitian<Real>& op, const State<Real>& psi) {
  return decompose(op, psi).spread;
}

namespace detail {

template <typename Real>
Decomposition<Real> decompose_non_eigenstate(const Hermitian<Real>& op, const State<Real>& psi,
                                             const char* what) {
  Decomposition<Real> d = decompose(op, psi);
  if (d.is_eigenstate()) {
    std::ostringstream msg;
    msg << what << ": state is an eigenstate of the operator (spread " << d.spread << ")";
    throw EigenstateInput(msg.str());
  }
  return d;
}

}  // namespace detail

/// Decomposes A|ψ⟩, then A|ψ⊥⟩, and reports ⟨ψ|ψ⊥⊥⟩. Since
/// ⟨ψ|A|ψ⊥⟩ = ΔA_ψ is real, ΔA_ψ = ΔA_ψ⊥ ⟨ψ|ψ⊥⊥⟩ forces the overlap real and
/// nonnegative, and ΔA_ψ⊥ ≥ ΔA_ψ.
template <typename Real>
ChainResult<Real> orthogonal_chain(const Hermitian<Real>& op, const State<Real>& psi) {
  const Decomposition<Real> first = detail::decompose_non_eigenstate(op, psi, "orthogonal_chain");
  const Decomposition<Real> second = decompose(op, *first.perp);
  if (second.is_eigenstate()) {
    std::ostringstream msg;
    msg << "orthogonal_chain: residual direction is an eigenstate although spread is "
        << first.spread;
    throw DegenerateChain(msg.str());
  }
  return {first.spread, second.spread, inner_product(psi, *second.perp), *first.perp,
          *second.perp};
}

/// A state orthogonal to ψ whose spread is at least that of ψ, which shows a
/// maximal-spread state cannot be unique.
template <typename Real>
State<Real> nonuniqueness_witness(const Hermitian<Real>& op, const State<Real>& psi) {
  const Decomposition<Real> d = detail::decompose_non_eigenstate(op, psi, "nonuniqueness_witness");
  const State<Real>& witness = *d.perp;
  const Real tol = Real(1e-10) * (Real(1) + op.max_abs());
  const Real witness_spread = spread(op, witness);
  if (witness_spread < d.spread - tol || std::abs(inner_product(witness, psi)) > tol) {
    std::ostringstream msg;
    msg << "nonuniqueness_witness: witness spread " << witness_spread << " vs " << d.spread;
    throw IdentityViolation(msg.str());
  }
  return witness;
}

/// With ψ⊥ fixed by decompose(A, ψ), B|ψ⟩ = ⟨B⟩|ψ⟩ + ΔB e^{iφ}|ψ⊥⟩ in two
/// dimensions. Returns φ in [0, 2π).
template <typename Real>
PhaseResult<Real> relative_phase(const Hermitian<Real>& a, const Hermitian<Real>& b,
                                 const State<Real>& psi) {
  detail::require_same_dim(a.dim(), b.dim(), "relative_phase");
  detail::require_same_dim(a.dim(), psi.dim(), "relative_phase");
  if (psi.dim() != 2)
    throw DimensionMismatch("relative_phase: only defined in dimension 2 (got " +
                            std::to_string(psi.dim()) + ")");
  const Decomposition<Real> da = detail::decompose_non_eigenstate(a, psi, "relative_phase");
  const Decomposition<Real> db = detail::decompose_non_eigenstate(b, psi, "relative_phase");

  const Complex<Real> unit = braket(*da.perp, b.matrix(), psi) / db.spread;
  if (std::abs(std::abs(unit) - Real(1)) > Real(1e-10)) {
    std::ostringstream msg;
    msg << "relative_phase: |e^{i phi}| = " << std::abs(unit);
    throw IdentityViolation(msg.str());
  }
  const Real two_pi = Real(2) * std::numbers::pi_v<Real>;
  Real phi = std::arg(unit);
  if (phi < 0) phi += two_pi;
  if (phi >= two_pi) phi = 0;
  return {phi, da.spread, db.spread};
}

/// ⟨[A,B]⟩ = 2i ΔA ΔB sin φ, checked against the direct expectation of the
/// commutator.
template <typename Real>
Complex<Real> commutator_via_phase(const Hermitian<Real>& a, const Hermitian<Real>& b,
                                   const State<Real>& psi) {
  const PhaseResult<Real> p = relative_phase(a, b, psi);
  const Complex<Real> value(0, Real(2) * p.spread_a * p.spread_b * std::sin(p.phi));
  const Complex<Real> direct = braket(psi, commutator(a, b), psi);
  const Real tol = Real(1e-10) * (Real(1) + a.max_abs() * b.max_abs());
  if (std::abs(value - direct) > tol) {
    std::ostringstream msg;
    msg << "commutator_via_phase: " << value << " disagrees with direct " << direct;
    throw IdentityViolation(msg.str());
  }
  return value;
}

/// The flawed evaluation of ⟨[A,B]⟩ that reuses A's residual direction for B
/// without the relative phase: it builds B|ψ⟩ ≈ ⟨B⟩|ψ⟩ + ΔB|ψ⊥A⟩ and
/// A|ψ⟩ = ⟨A⟩|ψ⟩ + ΔA|ψ⊥A⟩, then forms ⟨AB⟩ - ⟨BA⟩ from the two vectors. The
/// result is always zero, which is wrong whenever sin φ ≠ 0.
template <typename Real>
Complex<Real> naive_commutator(const Hermitian<Real>& a, const Hermitian<Real>& b,
                               const State<Real>& psi) {
  detail::require_same_dim(a.dim(), b.dim(), "naive_commutator");
  const Decomposition<Real> da = detail::decompose_non_eigenstate(a, psi, "naive_commutator");
  const Decomposition<Real> db = decompose(b, psi);
  const Vector<Real> a_psi = da.mean * psi.amplitudes() + da.spread * da.perp->amplitudes();
  const Vector<Real> b_psi = db.mean * psi.amplitudes() + db.spread * da.perp->amplitudes();
  // ⟨ψ|AB|ψ⟩ = (A|ψ⟩)†(B|ψ⟩) for Hermitian A.
  return a_psi.dot(b_psi) - b_psi.dot(a_psi);
}

}  // namespace uk
