#pragma once

// Uncertainty relations for a pair of observables in a pure state. Each
// relation is evaluated two ways: directly from matrix products, and from the
// residual directions ψ⊥A, ψ⊥B of the decomposition. With w = ⟨ψ⊥A|ψ⊥B⟩,
//
//   ⟨[A,B]⟩               = 2i ΔA ΔB Im w
//   ½⟨{A,B}⟩ - ⟨A⟩⟨B⟩     = ΔA ΔB Re w
//   ΔA ΔB w               = ½⟨[A,B]⟩ + ½⟨{A,B}⟩ - ⟨A⟩⟨B⟩
//
// and |w| ≤ 1 gives the Heisenberg, anticommutator and combined bounds.

#include <optional>
#include <string_view>

#include "uk/decomposition.hpp"
#include "uk/linalg.hpp"

namespace uk {

struct CrossExpectation {
  ComplexScalar ba;  // ⟨BA⟩
  ComplexScalar ab;  // ⟨AB⟩
};

/// atol + rtol·‖A‖_max·‖B‖_max with atol = rtol = 1e-10.
double identity_tolerance(const HermitianOperator& a, const HermitianOperator& b);

/// ⟨BA⟩ and ⟨AB⟩ from matrix products, cross-checked against
/// ⟨B⟩⟨A⟩ + ΔB ΔA ⟨ψ⊥B|ψ⊥A⟩ (resp. the A-first form). Throws IdentityViolation
/// if the two routes disagree.
CrossExpectation cross_expectation(const HermitianOperator& a, const HermitianOperator& b,
                                   const StateVector& psi);

enum class Bound { Heisenberg, Anticommutator, Combined };

std::string_view bound_name(Bound b);

/// Residuals |lhs - rhs| of the three exact identities. When either spread is
/// zero the overlap is undefined and these hold the magnitudes of the direct
/// sides, which must then vanish.
struct IdentityResiduals {
  double commutator = 0;
  double anticommutator = 0;
  double combined = 0;

  double max() const;
};

struct UncertaintyReport {
  double mean_a = 0;
  double mean_b = 0;
  double spread_a = 0;
  double spread_b = 0;
  std::optional<ComplexScalar> overlap;  // ⟨ψ⊥A|ψ⊥B⟩
  ComplexScalar comm_exp;                // ⟨[A,B]⟩
  double acomm_exp = 0;                  // ⟨{A,B}⟩
  double lhs = 0;                        // ΔA ΔB
  double bound_heisenberg = 0;           // ½|⟨[A,B]⟩|
  double bound_anticomm = 0;             // |½⟨{A,B}⟩ - ⟨A⟩⟨B⟩|
  double bound_combined = 0;             // root-sum-square of the two above
  bool degenerate = false;
  IdentityResiduals residuals;
  double tolerance = 0;

  double bound(Bound b) const;
  Bound tightest() const;
  /// |lhs - bound| ≤ 1e-9
  bool saturates(Bound b) const;
  bool identities_hold() const;
  bool bounds_hold() const;
};

UncertaintyReport report(const HermitianOperator& a, const HermitianOperator& b,
                         const StateVector& psi);

}  // namespace uk
