#include "uk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "uk/decomposition.hpp"
#include "uk/inequalities.hpp"
#include "uk/maxsearch.hpp"

namespace uk::verify {

namespace {

// A check returns its residual and the threshold it must not exceed.
struct Outcome {
  double residual;
  double limit;
};

class Tally {
 public:
  void record(const std::string& name, int case_index, Index dim,
              const std::function<Outcome()>& check) {
    InvariantStat& stat = stat_for(name);
    try {
      const Outcome o = check();
      stat.max_residual = std::max(stat.max_residual, o.residual);
      if (o.residual <= o.limit) {
        ++stat.passed;
        return;
      }
      std::ostringstream msg;
      msg << "residual " << o.residual << " exceeds " << o.limit;
      fail(stat, case_index, dim, msg.str());
    } catch (const Error& e) {
      fail(stat, case_index, dim, e.what());
    }
  }

  std::vector<InvariantStat> take() { return std::move(stats_); }

 private:
  InvariantStat& stat_for(const std::string& name) {
    const auto it = index_.find(name);
    if (it != index_.end()) return stats_[it->second];
    index_.emplace(name, stats_.size());
    InvariantStat& stat = stats_.emplace_back();
    stat.name = name;
    return stat;
  }

  static void fail(InvariantStat& stat, int case_index, Index dim, std::string detail) {
    ++stat.failed;
    if (!stat.first_failure) stat.first_failure = Failure{case_index, dim, std::move(detail)};
  }

  std::vector<InvariantStat> stats_;
  std::map<std::string, std::size_t> index_;
};

double max_entry(const ComplexMatrix& m) { return max_abs(m); }

void check_pair(Tally& t, int idx, const HermitianOperator& a, const HermitianOperator& b,
                const StateVector& psi, Rng& rng) {
  const Index d = psi.dim();
  const double atol = 1e-10 * (1.0 + a.max_abs());

  t.record("eigh.reconstruction", idx, d, [&] {
    const EigenDecomposition<double> eig = eigh(a);
    const ComplexMatrix rebuilt =
        eig.eigenvectors * eig.eigenvalues.cast<ComplexScalar>().asDiagonal() *
        eig.eigenvectors.adjoint();
    return Outcome{max_entry(rebuilt - a.matrix()), 1e-9 * (1.0 + a.max_abs())};
  });
  t.record("eigh.eigenvector_expectation", idx, d, [&] {
    const EigenDecomposition<double> eig = eigh(a);
    double worst = 0;
    for (Index k = 0; k < eig.size(); ++k)
      worst = std::max(worst, std::abs(expectation(a, eig.eigenvector(k)) - eig.eigenvalues(k)));
    return Outcome{worst, 1e-9 * (1.0 + a.max_abs())};
  });
  t.record("linalg.inner_product_conjugate_symmetry", idx, d, [&] {
    const StateVector other = random_state(d, rng);
    return Outcome{std::abs(inner_product(psi, other) - std::conj(inner_product(other, psi))),
                   1e-15};
  });
  t.record("linalg.commutator_adjoint_symmetry", idx, d, [&] {
    const ComplexMatrix c = commutator(a, b);
    const ComplexMatrix ac = anticommutator(a, b);
    const double r = std::max(max_entry(c.adjoint() + c), max_entry(ac.adjoint() - ac));
    return Outcome{r, 1e-12 * (1.0 + a.max_abs() * b.max_abs())};
  });

  const Decomposition<double> dec = decompose(a, psi);
  t.record("decompose.reconstruction", idx, d, [&] {
    ComplexVector r = apply(a, psi) - dec.mean * psi.amplitudes();
    if (dec.perp) r -= dec.spread * dec.perp->amplitudes();
    const double orth = dec.perp ? std::abs(inner_product(*dec.perp, psi)) : 0.0;
    return Outcome{std::max(r.norm(), orth), atol};
  });
  t.record("decompose.spread_vs_moments", idx, d, [&] {
    const ComplexMatrix a2 = a.matrix() * a.matrix();
    const double m2 = braket(psi, a2, psi).real();
    const double m1 = braket(psi, a.matrix(), psi).real();
    return Outcome{std::abs(dec.spread - std::sqrt(std::max(0.0, m2 - m1 * m1))), atol};
  });
  t.record("decompose.perp_matrix_element", idx, d, [&] {
    if (!dec.perp) return Outcome{0, 0};
    const ComplexScalar elem = braket(*dec.perp, a.matrix(), psi);
    return Outcome{std::abs(elem - ComplexScalar(dec.spread)), atol};
  });
  t.record("decompose.global_phase_invariance", idx, d, [&] {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    const double theta = angle(rng);
    const Decomposition<double> rot = decompose(a, psi.phased(theta));
    double r = std::max(std::abs(rot.mean - dec.mean), std::abs(rot.spread - dec.spread));
    if (dec.perp && rot.perp)
      r = std::max(r, (rot.perp->amplitudes() - dec.perp->phased(theta).amplitudes()).norm());
    else if (dec.perp.has_value() != rot.perp.has_value())
      r = 1;
    return Outcome{r, atol};
  });

  if (dec.perp) {
    const ChainResult<double> chain = orthogonal_chain(a, psi);
    t.record("chain.overlap_relation", idx, d, [&] {
      const double r = std::max(
          std::abs(chain.spread_psi - chain.spread_perp * chain.overlap.real()),
          std::abs(chain.overlap.imag()));
      const bool in_range = chain.overlap.real() >= -1e-12 && chain.overlap.real() <= 1 + 1e-12;
      return Outcome{in_range ? r : 1.0, 1e-9};
    });
    t.record("chain.perp_spread_dominates", idx, d, [&] {
      return Outcome{std::max(0.0, chain.spread_psi - chain.spread_perp), 1e-12};
    });
    if (d == 2) {
      t.record("chain.two_dim_equal_spreads", idx, d, [&] {
        return Outcome{std::abs(chain.spread_psi - chain.spread_perp), 1e-10};
      });
    }
    t.record("witness.orthogonal_and_dominant", idx, d, [&] {
      const StateVector w = nonuniqueness_witness(a, psi);
      const double r = std::max(std::abs(inner_product(w, psi)),
                                std::max(0.0, dec.spread - spread(a, w)));
      return Outcome{r, 1e-10};
    });
  }

  const UncertaintyReport rep = report(a, b, psi);
  const double itol = identity_tolerance(a, b);
  t.record("identity.commutator", idx, d, [&] { return Outcome{rep.residuals.commutator, itol}; });
  t.record("identity.anticommutator", idx, d,
           [&] { return Outcome{rep.residuals.anticommutator, itol}; });
  t.record("identity.combined", idx, d, [&] { return Outcome{rep.residuals.combined, itol}; });
  t.record("bounds.satisfied", idx, d, [&] {
    const double worst = std::max({rep.bound_heisenberg - rep.lhs, rep.bound_anticomm - rep.lhs,
                                   rep.bound_combined - rep.lhs, 0.0});
    return Outcome{worst, itol};
  });
  t.record("bounds.combined_dominates", idx, d, [&] {
    const double worst = std::max({rep.bound_heisenberg - rep.bound_combined,
                                   rep.bound_anticomm - rep.bound_combined, 0.0});
    return Outcome{worst, 0.0};
  });
  t.record("bounds.combined_structure", idx, d, [&] {
    const double r = std::abs(rep.bound_combined * rep.bound_combined -
                              rep.bound_anticomm * rep.bound_anticomm -
                              rep.bound_heisenberg * rep.bound_heisenberg);
    return Outcome{r, 1e-9 * (1.0 + rep.bound_combined * rep.bound_combined)};
  });
  if (rep.overlap) {
    t.record("overlap.modulus", idx, d,
             [&] { return Outcome{std::max(0.0, std::abs(*rep.overlap) - 1.0), 1e-12}; });
  }

  if (d == 2 && !rep.degenerate) {
    t.record("phase.matches_overlap", idx, d, [&] {
      const PhaseResult<double> p = relative_phase(a, b, psi);
      const double r = std::max(std::abs(rep.overlap->real() - std::cos(p.phi)),
                                std::abs(rep.overlap->imag() - std::sin(p.phi)));
      return Outcome{r, 1e-10};
    });
    t.record("phase.commutator_via_phase", idx, d, [&] {
      return Outcome{std::abs(commutator_via_phase(a, b, psi) - rep.comm_exp), itol};
    });
    t.record("paradox.naive_discrepancy", idx, d, [&] {
      const PhaseResult<double> p = relative_phase(a, b, psi);
      const ComplexScalar naive = naive_commutator(a, b, psi);
      const double expected_gap = 2.0 * p.spread_a * p.spread_b * std::abs(std::sin(p.phi));
      const double r = std::max(std::abs(naive),
                                std::abs(std::abs(rep.comm_exp - naive) - expected_gap));
      return Outcome{r, 1e-10};
    });
  }
}

}  // namespace

bool VerifySummary::all_passed() const {
  return std::all_of(invariants.begin(), invariants.end(),
                     [](const InvariantStat& s) { return s.failed == 0; });
}

const InvariantStat* VerifySummary::find(const std::string& name) const {
  for (const auto& s : invariants)
    if (s.name == name) return &s;
  return nullptr;
}

double variance_directional_fd(const HermitianOperator& op, const StateVector& psi,
                               const ComplexVector& direction, double step) {
  const ComplexVector& v = psi.amplitudes();
  const ComplexVector tangent = direction - v * v.dot(direction);
  const StateVector plus(ComplexVector(v + step * tangent));
  const StateVector minus(ComplexVector(v - step * tangent));
  return (variance(op, plus) - variance(op, minus)) / (2.0 * step);
}

expr::Expr random_expr(Rng& rng, int max_depth) {
  using expr::Expr;
  using expr::NodeKind;
  static const char* const kNames[] = {"id", "sx", "sy", "sz"};
  std::uniform_int_distribution<int> leaf_pick(0, 5);
  std::uniform_int_distribution<int> node_pick(0, 6);
  std::uniform_int_distribution<int> coin(0, 3);

  if (max_depth <= 1 || coin(rng) == 0) {
    const int k = leaf_pick(rng);
    if (k < 4) return Expr::ref(kNames[k]);
    if (k == 4) return Expr::scalar({0.0, 1.0});
    std::uniform_real_distribution<double> mag(0.0, 10.0);
    return Expr::scalar(mag(rng));
  }
  switch (node_pick(rng)) {
    case 0:
      return Expr::unary(NodeKind::Neg, random_expr(rng, max_depth - 1));
    case 1:
      return Expr::unary(NodeKind::Dag, random_expr(rng, max_depth - 1));
    default: {
      static constexpr NodeKind kBinary[] = {NodeKind::Add, NodeKind::Sub, NodeKind::Mul,
                                             NodeKind::Comm, NodeKind::Acomm};
      std::uniform_int_distribution<int> which(0, 4);
      const NodeKind kind = kBinary[which(rng)];
      Expr lhs = random_expr(rng, max_depth - 1);
      return Expr::binary(kind, std::move(lhs), random_expr(rng, max_depth - 1));
    }
  }
}

VerifySummary run_suite(const VerifyConfig& cfg) {
  if (cfg.min_dim < 2 || cfg.max_dim < cfg.min_dim)
    throw DomainError("verify: dimension range must satisfy 2 <= min <= max");
  if (cfg.cases < 0) throw DomainError("verify: case count must be nonnegative");

  Tally tally;
  std::uniform_int_distribution<Index> dim_pick(cfg.min_dim, cfg.max_dim);
  for (int idx = 0; idx < cfg.cases; ++idx) {
    Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(idx));
    const Index d = dim_pick(rng);
    const HermitianOperator a = random_hermitian(d, rng);
    const HermitianOperator b = random_hermitian(d, rng);
    const StateVector psi = random_state(d, rng);

    try {
      check_pair(tally, idx, a, b, psi, rng);
    } catch (const Error& e) {
      tally.record("case.completed", idx, d, [&]() -> Outcome { throw e; });
    }

    if (cfg.extra_operator) {
      const HermitianOperator& x = *cfg.extra_operator;
      const StateVector phi = random_state(x.dim(), rng);
      const HermitianOperator partner = random_hermitian(x.dim(), rng);
      try {
        check_pair(tally, idx, x, partner, phi, rng);
      } catch (const Error& e) {
        tally.record("case.completed", idx, x.dim(), [&]() -> Outcome { throw e; });
      }
    }

    tally.record("gradient.finite_difference", idx, d, [&] {
      const VarianceGradient g = variance_gradient(a, psi);
      double worst = 0;
      for (int k = 0; k < 8; ++k) {
        const ComplexVector delta = random_gaussian_vector(d, rng);
        const ComplexVector& v = psi.amplitudes();
        const ComplexVector tangent = delta - v * v.dot(delta);
        const double analytic = tangent.dot(g.tangent).real();
        const double fd = variance_directional_fd(a, psi, tangent, 1e-5);
        const double scale = std::max(g.norm() * tangent.norm(), 1e-300);
        worst = std::max(worst, std::abs(fd - analytic) / scale);
      }
      return Outcome{worst, 1e-6};
    });

    if (cfg.include_search) {
      SearchConfig sc;
      sc.seed = cfg.seed + static_cast<std::uint64_t>(idx);
      const SearchResult res = maximize_spread(a, sc);
      tally.record("search.matches_oracle", idx, d, [&] {
        return Outcome{std::abs(res.spread - res.oracle_spread), 1e-6};
      });
      tally.record("search.witness_orthogonal", idx, d, [&] {
        return Outcome{std::abs(inner_product(res.witness, res.state)), 1e-10};
      });
      tally.record("search.witness_comaximizer", idx, d, [&] {
        return Outcome{std::max(0.0, res.spread - res.witness_spread), 1e-8};
      });
      tally.record("search.monotone_trace", idx, d, [&] {
        double worst = 0;
        for (std::size_t k = 1; k < res.variance_trace.size(); ++k)
          worst = std::max(worst, res.variance_trace[k - 1] - res.variance_trace[k]);
        return Outcome{worst, 0.0};
      });
    }

    tally.record("parser.round_trip", idx, d, [&] {
      const expr::Expr e = random_expr(rng, 5);
      return Outcome{expr::parse(expr::to_string(e)) == e ? 0.0 : 1.0, 0.0};
    });
  }

  VerifySummary summary;
  summary.seed = cfg.seed;
  summary.cases = cfg.cases;
  summary.min_dim = cfg.min_dim;
  summary.max_dim = cfg.max_dim;
  summary.invariants = tally.take();
  return summary;
}

}  // namespace uk::verify
