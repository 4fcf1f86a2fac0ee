#include "uk/maxsearch.hpp"

#include <cmath>
#include <optional>

#include "uk/decomposition.hpp"
#include "uk/random.hpp"

namespace uk {

namespace {

constexpr int kMaxHalvings = 30;
constexpr double kMaxStep = 1e3;
// Sufficient-increase fraction. Accepting any increase lets the step settle
// near 2/curvature, where iterates bounce across the ridge and stall.
constexpr double kArmijo = 0.25;

struct Ascent {
  StateVector state;
  double variance;
  int iterations;
  bool converged;
  std::vector<double> trace;
};

Ascent ascend(const HermitianOperator& op, StateVector psi, const SearchConfig& cfg) {
  const double scale = 1.0 + op.max_abs();
  // Below this gradient size a failed line search is round-off, not a bad step.
  const double stall_tol = 1e-6 * scale * scale;

  double f = variance(op, psi);
  double step = cfg.init_step;
  std::vector<double> trace{f};
  int iter = 0;
  bool converged = false;
  for (; iter < cfg.max_iters; ++iter) {
    const VarianceGradient g = variance_gradient(op, psi);
    const double gnorm = g.norm();
    if (gnorm <= cfg.grad_tol) {
      converged = true;
      break;
    }
    std::optional<StateVector> next;
    double f_next = f;
    for (int halving = 0; halving <= kMaxHalvings; ++halving, step *= 0.5) {
      const ComplexVector trial = psi.amplitudes() + step * g.tangent;
      StateVector candidate(trial);
      const double f_trial = variance(op, candidate);
      if (f_trial > f && f_trial >= f + kArmijo * step * gnorm * gnorm) {
        next = std::move(candidate);
        f_next = f_trial;
        break;
      }
    }
    if (!next) {
      converged = gnorm <= stall_tol;
      break;
    }
    psi = std::move(*next);
    f = f_next;
    trace.push_back(f);
    step = std::min(2.0 * step, kMaxStep);
  }
  return {std::move(psi), f, iter, converged, std::move(trace)};
}

}  // namespace

void SearchConfig::validate() const {
  if (restarts <= 0 || max_iters <= 0 || !(init_step > 0) || !(grad_tol > 0))
    throw DomainError("search config: restarts, max_iters, init_step and grad_tol must be positive");
}

double variance(const HermitianOperator& op, const StateVector& psi) {
  const ComplexVector a_psi = apply(op, psi);
  const double mean = psi.amplitudes().dot(a_psi).real();
  return std::max(0.0, a_psi.squaredNorm() - mean * mean);
}

VarianceGradient variance_gradient(const HermitianOperator& op, const StateVector& psi) {
  const ComplexVector& v = psi.amplitudes();
  const ComplexVector a_psi = apply(op, psi);
  const ComplexVector a2_psi = op.matrix() * a_psi;
  const double mean = v.dot(a_psi).real();
  const double mean_sq = v.dot(a2_psi).real();

  ComplexVector g = 2.0 * (a2_psi - mean_sq * v) - 4.0 * mean * (a_psi - mean * v);
  const double raw_norm = g.norm();
  g -= v * v.dot(g);
  return {std::move(g), raw_norm};
}

StateVector orthogonal_basis_completion(const StateVector& psi) {
  const ComplexVector& v = psi.amplitudes();
  for (Index k = 0; k < psi.dim(); ++k) {
    ComplexVector e = ComplexVector::Unit(psi.dim(), k);
    e -= v * v.dot(e);
    const double norm = e.norm();
    if (norm > 1e-6) return StateVector::from_direction(e, norm);
  }
  throw DomainError("orthogonal_basis_completion: dimension must be at least 2");
}

SearchResult maximize_spread(const HermitianOperator& op, const SearchConfig& cfg) {
  cfg.validate();
  if (op.dim() < 2) throw DimensionMismatch("maximize_spread: dimension must be at least 2");

  std::optional<Ascent> best;
  int best_restart = 0;
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(r));
    Ascent run = ascend(op, random_state(op.dim(), rng), cfg);
    if (!best || run.variance > best->variance) {
      best = std::move(run);
      best_restart = r;
    }
  }

  const StateVector& state = best->state;
  const double found = spread(op, state);
  const StateVector witness = found > spread_tolerance(op) ? nonuniqueness_witness(op, state)
                                                           : orthogonal_basis_completion(state);
  const EigenDecomposition<double> eig = eigh(op);

  return SearchResult{state,
                      found,
                      best->iterations,
                      best->converged,
                      witness,
                      spread(op, witness),
                      0.5 * (eig.highest() - eig.lowest()),
                      best_restart,
                      std::move(best->trace)};
}

}  // namespace uk
