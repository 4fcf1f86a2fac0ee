#pragma once

// Maximal-spread states by projected gradient ascent of the variance
// ⟨A²⟩ - ⟨A⟩² on the unit sphere. The analytic maximum (λmax - λmin)/2 comes
// from the eigensolver and is reported alongside for comparison.

#include <cstdint>
#include <vector>

#include "uk/linalg.hpp"

namespace uk {

struct SearchConfig {
  int restarts = 8;
  int max_iters = 2000;
  double init_step = 0.1;
  double grad_tol = 1e-9;
  std::uint64_t seed = 0;

  /// Throws DomainError unless every field is positive.
  void validate() const;
};

struct VarianceGradient {
  ComplexVector tangent;  // projected orthogonal to ψ
  double raw_norm = 0;    // norm before projection

  double norm() const { return tangent.norm(); }
};

double variance(const HermitianOperator& op, const StateVector& psi);

/// Riemannian gradient of the variance w.r.t. the real inner product
/// Re⟨·|·⟩: g = 2(A²ψ - ⟨A²⟩ψ) - 4⟨A⟩(Aψ - ⟨A⟩ψ), projected off ψ. The
/// directional derivative along a tangent δ is Re⟨δ|g⟩.
VarianceGradient variance_gradient(const HermitianOperator& op, const StateVector& psi);

struct SearchResult {
  StateVector state;
  double spread = 0;
  int iterations = 0;  // of the winning restart
  bool converged = false;
  StateVector witness;  // orthogonal to `state`, at least as uncertain
  double witness_spread = 0;
  double oracle_spread = 0;  // (λmax - λmin)/2
  int best_restart = 0;
  std::vector<double> variance_trace;  // accepted variances of the winning restart
};

/// Best of `cfg.restarts` ascents from random starts. Ties go to the lowest
/// restart index. Non-convergence is reported, not thrown.
SearchResult maximize_spread(const HermitianOperator& op, const SearchConfig& cfg);

/// First standard basis vector, after Gram-Schmidt against ψ, that is not
/// (numerically) parallel to ψ.
StateVector orthogonal_basis_completion(const StateVector& psi);

}  // namespace uk
