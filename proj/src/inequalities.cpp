#include "uk/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace uk {

namespace {

constexpr double kSaturationTol = 1e-9;

void require_agreement(ComplexScalar direct, ComplexScalar formula, double tol,
                       const char* what) {
  if (std::abs(direct - formula) > tol) {
    std::ostringstream msg;
    msg << "cross_expectation: " << what << " direct " << direct << " vs decomposition "
        << formula;
    throw IdentityViolation(msg.str());
  }
}

}  // namespace

double identity_tolerance(const HermitianOperator& a, const HermitianOperator& b) {
  return 1e-10 + 1e-10 * a.max_abs() * b.max_abs();
}

CrossExpectation cross_expectation(const HermitianOperator& a, const HermitianOperator& b,
                                   const StateVector& psi) {
  detail::require_same_dim(a.dim(), b.dim(), "cross_expectation");
  const ComplexMatrix ba_op = b.matrix() * a.matrix();
  const ComplexMatrix ab_op = a.matrix() * b.matrix();
  const CrossExpectation direct{braket(psi, ba_op, psi), braket(psi, ab_op, psi)};

  const Decomposition<double> da = decompose(a, psi);
  const Decomposition<double> db = decompose(b, psi);
  ComplexScalar ba = db.mean * da.mean;
  ComplexScalar ab = da.mean * db.mean;
  if (da.perp && db.perp) {
    ba += db.spread * da.spread * inner_product(*db.perp, *da.perp);
    ab += da.spread * db.spread * inner_product(*da.perp, *db.perp);
  }
  const double tol = identity_tolerance(a, b);
  require_agreement(direct.ba, ba, tol, "<BA>");
  require_agreement(direct.ab, ab, tol, "<AB>");
  return direct;
}

std::string_view bound_name(Bound b) {
  switch (b) {
    case Bound::Heisenberg:
      return "heisenberg";
    case Bound::Anticommutator:
      return "anticommutator";
    case Bound::Combined:
      return "combined";
  }
  return "unknown";
}

double IdentityResiduals::max() const { return std::max({commutator, anticommutator, combined}); }

double UncertaintyReport::bound(Bound b) const {
  switch (b) {
    case Bound::Heisenberg:
      return bound_heisenberg;
    case Bound::Anticommutator:
      return bound_anticomm;
    case Bound::Combined:
      return bound_combined;
  }
  return 0;
}

Bound UncertaintyReport::tightest() const {
  Bound best = Bound::Heisenberg;
  for (Bound b : {Bound::Anticommutator, Bound::Combined})
    if (bound(b) > bound(best)) best = b;
  return best;
}

bool UncertaintyReport::saturates(Bound b) const {
  return std::abs(lhs - bound(b)) <= kSaturationTol;
}

bool UncertaintyReport::identities_hold() const { return residuals.max() <= tolerance; }

bool UncertaintyReport::bounds_hold() const {
  return lhs >= bound_heisenberg - tolerance && lhs >= bound_anticomm - tolerance &&
         lhs >= bound_combined - tolerance && bound_combined >= bound_heisenberg &&
         bound_combined >= bound_anticomm;
}

UncertaintyReport report(const HermitianOperator& a, const HermitianOperator& b,
                         const StateVector& psi) {
  detail::require_same_dim(a.dim(), b.dim(), "report");
  detail::require_same_dim(a.dim(), psi.dim(), "report");

  UncertaintyReport r;
  r.tolerance = identity_tolerance(a, b);

  const Decomposition<double> da = decompose(a, psi);
  const Decomposition<double> db = decompose(b, psi);
  r.mean_a = da.mean;
  r.mean_b = db.mean;
  r.spread_a = da.spread;
  r.spread_b = db.spread;
  r.lhs = da.spread * db.spread;

  // Throws if the product and decomposition routes disagree.
  cross_expectation(a, b, psi);

  r.comm_exp = braket(psi, commutator(a, b), psi);
  const ComplexScalar acomm = braket(psi, anticommutator(a, b), psi);
  if (std::abs(r.comm_exp.real()) > r.tolerance || std::abs(acomm.imag()) > r.tolerance) {
    std::ostringstream msg;
    msg << "report: <[A,B]> = " << r.comm_exp << " not imaginary or <{A,B}> = " << acomm
        << " not real";
    throw IdentityViolation(msg.str());
  }
  r.acomm_exp = acomm.real();

  const double correlation = 0.5 * r.acomm_exp - r.mean_a * r.mean_b;
  r.bound_heisenberg = 0.5 * std::abs(r.comm_exp);
  r.bound_anticomm = std::abs(correlation);
  r.bound_combined = std::hypot(r.bound_anticomm, r.bound_heisenberg);

  const ComplexScalar combined_rhs = 0.5 * r.comm_exp + ComplexScalar(correlation);
  if (da.perp && db.perp) {
    const ComplexScalar w = inner_product(*da.perp, *db.perp);
    r.overlap = w;
    r.residuals.commutator = std::abs(r.comm_exp - ComplexScalar(0, 2.0 * r.lhs * w.imag()));
    r.residuals.anticommutator = std::abs(correlation - r.lhs * w.real());
    r.residuals.combined = std::abs(r.lhs * w - combined_rhs);
  } else {
    r.degenerate = true;
    r.residuals.commutator = std::abs(r.comm_exp);
    r.residuals.anticommutator = std::abs(correlation);
    r.residuals.combined = std::abs(combined_rhs);
  }
  return r;
}

}  // namespace uk
