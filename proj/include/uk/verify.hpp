#pragma once

// Randomized property sweep over every module: eigensolver, decomposition,
// orthogonal chain, uncertainty identities and bounds, two-dimensional phase
// relations, the variance gradient, the maximal-spread search and the
// expression printer/parser. Case i draws from make_rng(seed, i), so any
// failure can be replayed from (seed, index).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uk/expr.hpp"
#include "uk/linalg.hpp"
#include "uk/random.hpp"

namespace uk::verify {

struct VerifyConfig {
  Index min_dim = 2;
  Index max_dim = 12;
  int cases = 500;
  std::uint64_t seed = 42;
  bool include_search = true;
  /// Extra operator exercised alongside the random ones.
  std::optional<HermitianOperator> extra_operator;
};

struct Failure {
  int case_index;
  Index dim;
  std::string detail;
};

struct InvariantStat {
  std::string name;
  int passed = 0;
  int failed = 0;
  double max_residual = 0;
  std::optional<Failure> first_failure;
};

struct VerifySummary {
  std::uint64_t seed = 0;
  int cases = 0;
  Index min_dim = 0;
  Index max_dim = 0;
  std::vector<InvariantStat> invariants;

  bool all_passed() const;
  const InvariantStat* find(const std::string& name) const;
};

VerifySummary run_suite(const VerifyConfig& cfg);

/// Random tree of depth at most `max_depth` over the default Pauli names
/// whose literals survive printing.
expr::Expr random_expr(Rng& rng, int max_depth);

/// Central difference of the variance along tangent direction `direction`
/// (made orthogonal to ψ first), normalizing after each displacement.
double variance_directional_fd(const HermitianOperator& op, const StateVector& psi,
                               const ComplexVector& direction, double step);

}  // namespace uk::verify
