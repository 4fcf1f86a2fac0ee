#include "uk/commands.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "uk/decomposition.hpp"
#include "uk/expr.hpp"
#include "uk/inequalities.hpp"
#include "uk/io.hpp"
#include "uk/maxsearch.hpp"
#include "uk/pauli.hpp"
#include "uk/random.hpp"
#include "uk/verify.hpp"

namespace uk::cli {

namespace {

using nlohmann::json;

constexpr double kParadoxTol = 1e-12;

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const NumericalError& e) {
    err << "check failed: " << e.what() << '\n';
    return kCheckFailed;
  }
}

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(12) << (x == 0.0 ? 0.0 : x);
  return s.str();
}

std::string fixed6(double x) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(6) << (std::abs(x) < 5e-7 ? 0.0 : x);
  return s.str();
}

std::string format_vector(const ComplexVector& v) {
  std::string out;
  for (Index k = 0; k < v.size(); ++k) {
    if (k) out += ' ';
    out += "[" + fmt(v(k).real()) + ", " + fmt(v(k).imag()) + "]";
  }
  return out;
}

void emit_json(std::ostream& out, const json& doc) { out << doc.dump() << '\n'; }

HermitianOperator hermitian_operator(const std::string& spec) {
  return HermitianOperator(resolve_operator(spec));
}

}  // namespace

ComplexMatrix resolve_operator(const std::string& spec) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(spec, ec)) return io::load_operator_file(spec);
  try {
    return expr::evaluate(spec);
  } catch (const ParseError& e) {
    throw ParseError("'" + spec + "' is neither an operator file nor a valid expression: " +
                         e.what(),
                     e.position());
  }
}

StateVector resolve_state(const std::string& spec, std::ostream& err) {
  if (auto preset = io::state_preset(spec)) return *preset;
  std::error_code ec;
  if (!std::filesystem::is_regular_file(spec, ec))
    throw IoError("'" + spec + "' is neither a state preset nor a state file");
  io::LoadedState loaded = io::load_state_file(spec);
  if (loaded.norm_defect > 1e-6)
    err << "warning: " << spec << ": amplitudes renormalized (norm off by " << loaded.norm_defect
        << ")\n";
  return loaded.state;
}

std::pair<Index, Index> parse_dim_range(std::string_view text) {
  auto to_index = [&](std::string_view s) {
    long long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      throw InputError("invalid dimension range '" + std::string(text) + "'");
    return static_cast<Index>(v);
  };
  const std::size_t dots = text.find("..");
  if (dots == std::string_view::npos) {
    const Index d = to_index(text);
    return {d, d};
  }
  return {to_index(text.substr(0, dots)), to_index(text.substr(dots + 2))};
}

std::string format_complex(std::complex<double> z) {
  const double re = z.real() == 0.0 ? 0.0 : z.real();
  const double im = z.imag() == 0.0 ? 0.0 : z.imag();
  auto imag_part = [](double v) {
    if (v == 1.0) return std::string("i");
    if (v == -1.0) return std::string("-i");
    return fmt(v) + "i";
  };
  if (im == 0.0) return fmt(re);
  if (re == 0.0) return imag_part(im);
  std::string tail = imag_part(im);
  if (tail.front() != '-') tail = "+" + tail;
  return fmt(re) + tail;
}

ParadoxOutcome compute_paradox() {
  const HermitianOperator a = sigma_x();
  const HermitianOperator b = sigma_y();
  const StateVector psi = up_z();

  ParadoxOutcome p{};
  p.naive = naive_commutator(a, b, psi);
  p.direct = braket(psi, commutator(a, b), psi);
  const PhaseResult<double> phase = relative_phase(a, b, psi);
  p.phi = phase.phi;
  p.spread_a = phase.spread_a;
  p.spread_b = phase.spread_b;
  const Decomposition<double> da = decompose(a, psi);
  p.exp_i_phi = braket(*da.perp, b.matrix(), psi) / phase.spread_b;
  p.via_phase = commutator_via_phase(a, b, psi);
  p.self_check = std::abs(p.via_phase - p.direct) <= kParadoxTol &&
                 std::abs(p.naive - p.direct) > kParadoxTol;
  return p;
}

int cmd_decompose(const DecomposeOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const HermitianOperator a = hermitian_operator(opt.op);
    const StateVector psi = resolve_state(opt.state, err);
    const Decomposition<double> d = decompose(a, psi);
    if (opt.json) {
      emit_json(out, {{"mean", d.mean},
                      {"spread", d.spread},
                      {"perp", d.perp ? io::to_json(d.perp->amplitudes()) : json(nullptr)}});
      return kOk;
    }
    out << "A|psi> = <A>|psi> + dA|perp>   (dim " << psi.dim() << ")\n";
    out << "mean    " << fmt(d.mean) << '\n';
    out << "spread  " << fmt(d.spread) << '\n';
    if (d.perp)
      out << "perp    " << format_vector(d.perp->amplitudes()) << '\n';
    else
      out << "eigenstate: no perp\n";
    return kOk;
  });
}

int cmd_report(const ReportOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::optional<HermitianOperator> a, b;
    std::optional<StateVector> psi;
    if (opt.random_dim) {
      if (*opt.random_dim < 1) throw DomainError("--random: dimension must be positive");
      Rng rng = make_rng(opt.seed);
      a = random_hermitian(*opt.random_dim, rng);
      b = random_hermitian(*opt.random_dim, rng);
      psi = random_state(*opt.random_dim, rng);
    } else {
      if (opt.op_a.empty() || opt.op_b.empty())
        throw InputError("report: --op-a and --op-b are required unless --random is given");
      a = hermitian_operator(opt.op_a);
      b = hermitian_operator(opt.op_b);
      psi = resolve_state(opt.state, err);
    }
    const UncertaintyReport r = report(*a, *b, *psi);
    const bool ok = r.identities_hold() && r.bounds_hold();

    std::vector<std::string> saturated;
    for (Bound bd : {Bound::Heisenberg, Bound::Anticommutator, Bound::Combined})
      if (r.saturates(bd)) saturated.emplace_back(bound_name(bd));

    if (opt.json) {
      emit_json(out, {{"dim", psi->dim()},
                      {"mean_a", r.mean_a},
                      {"mean_b", r.mean_b},
                      {"spread_a", r.spread_a},
                      {"spread_b", r.spread_b},
                      {"overlap", r.overlap ? io::to_json(*r.overlap) : json(nullptr)},
                      {"comm_exp", io::to_json(r.comm_exp)},
                      {"acomm_exp", r.acomm_exp},
                      {"lhs", r.lhs},
                      {"bound_heisenberg", r.bound_heisenberg},
                      {"bound_anticomm", r.bound_anticomm},
                      {"bound_combined", r.bound_combined},
                      {"degenerate", r.degenerate},
                      {"residuals",
                       {{"commutator", r.residuals.commutator},
                        {"anticommutator", r.residuals.anticommutator},
                        {"combined", r.residuals.combined}}},
                      {"tolerance", r.tolerance},
                      {"tightest", bound_name(r.tightest())},
                      {"saturated", saturated},
                      {"identities_hold", r.identities_hold()},
                      {"bounds_hold", r.bounds_hold()}});
      return ok ? kOk : kCheckFailed;
    }

    out << "dim " << psi->dim() << (r.degenerate ? "  (degenerate: a spread is zero)" : "") << '\n';
    out << "<A> = " << fmt(r.mean_a) << "   dA = " << fmt(r.spread_a) << '\n';
    out << "<B> = " << fmt(r.mean_b) << "   dB = " << fmt(r.spread_b) << '\n';
    out << "<perpA|perpB> = " << (r.overlap ? format_complex(*r.overlap) : "undefined") << '\n';
    out << "<[A,B]> = " << format_complex(r.comm_exp) << "   <{A,B}> = " << fmt(r.acomm_exp)
        << '\n';
    out << "dA dB               = " << fmt(r.lhs) << '\n';
    for (Bound bd : {Bound::Heisenberg, Bound::Anticommutator, Bound::Combined}) {
      std::string label(bound_name(bd));
      label.resize(19, ' ');
      out << "  >= " << label << fmt(r.bound(bd)) << (r.saturates(bd) ? "   saturated" : "")
          << (bd == r.tightest() ? "   tightest" : "") << '\n';
    }
    out << "identity residuals (tolerance " << fmt(r.tolerance) << "):\n";
    out << "  commutator      " << fmt(r.residuals.commutator) << '\n';
    out << "  anticommutator  " << fmt(r.residuals.anticommutator) << '\n';
    out << "  combined        " << fmt(r.residuals.combined) << '\n';
    out << (ok ? "all identities and bounds hold\n" : "FAILED: identity or bound violated\n");
    return ok ? kOk : kCheckFailed;
  });
}

int cmd_paradox(bool as_json, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ParadoxOutcome p = compute_paradox();
    if (as_json) {
      emit_json(out, {{"naive", io::to_json(p.naive)},
                      {"direct", io::to_json(p.direct)},
                      {"via_phase", io::to_json(p.via_phase)},
                      {"phi", p.phi},
                      {"exp_i_phi", io::to_json(p.exp_i_phi)},
                      {"sin_phi", std::sin(p.phi)},
                      {"spread_a", p.spread_a},
                      {"spread_b", p.spread_b},
                      {"self_check", p.self_check}});
      return p.self_check ? kOk : kCheckFailed;
    }
    out << "Spin-1/2 with A = sx, B = sy, |psi> = up_z\n"
        << "  A|psi> = <A>|psi> + dA|perp>   with dA = " << fmt(p.spread_a) << '\n'
        << "  B|psi> = <B>|psi> + dB|perp>   with dB = " << fmt(p.spread_b)
        << "   (same |perp>, no phase)\n"
        << "naive:      <AB> = <BA> = <A><B> + dA dB, so <[A,B]> = " << format_complex(p.naive)
        << '\n'
        << "direct:     <up_z|[sx,sy]|up_z> = " << format_complex(p.direct) << '\n'
        << "resolution: |perp> is fixed by A only up to phase; B|psi> = <B>|psi> + dB e^{i phi}|perp>\n"
        << "            e^{i phi} = " << format_complex(p.exp_i_phi) << ", phi = " << fmt(p.phi)
        << ", sin phi = " << fmt(std::sin(p.phi)) << '\n'
        << "corrected:  2 i dA dB sin(phi) = " << format_complex(p.via_phase) << '\n'
        << (p.self_check ? "self-check passed: corrected value matches direct, naive does not\n"
                         : "SELF-CHECK FAILED\n");
    return p.self_check ? kOk : kCheckFailed;
  });
}

int cmd_search(const SearchOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const HermitianOperator a = hermitian_operator(opt.op);
    SearchConfig cfg;
    cfg.restarts = opt.restarts;
    cfg.max_iters = opt.max_iters;
    cfg.seed = opt.seed;
    const SearchResult r = maximize_spread(a, cfg);
    const double orth = std::abs(inner_product(r.witness, r.state));

    if (opt.json) {
      emit_json(out, {{"spread", r.spread},
                      {"oracle_spread", r.oracle_spread},
                      {"converged", r.converged},
                      {"iterations", r.iterations},
                      {"best_restart", r.best_restart},
                      {"state", io::to_json(r.state.amplitudes())},
                      {"witness", io::to_json(r.witness.amplitudes())},
                      {"witness_spread", r.witness_spread},
                      {"witness_overlap", orth}});
      return kOk;
    }
    out << "spread          " << fixed6(r.spread) << '\n'
        << "oracle spread   " << fixed6(r.oracle_spread) << "   ((lmax - lmin)/2)\n"
        << "converged       " << (r.converged ? "yes" : "no") << " after " << r.iterations
        << " iterations (restart " << r.best_restart << ")\n"
        << "maximizer       " << format_vector(r.state.amplitudes()) << '\n'
        << "witness         " << format_vector(r.witness.amplitudes()) << '\n'
        << "witness spread  " << fixed6(r.witness_spread) << '\n'
        << "|<witness|max>| " << fmt(orth)
        << (orth <= 1e-10 ? "   witness orthogonal" : "   NOT orthogonal") << '\n';
    return kOk;
  });
}

int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    verify::VerifyConfig cfg;
    std::tie(cfg.min_dim, cfg.max_dim) = parse_dim_range(opt.dims);
    cfg.cases = opt.cases;
    cfg.seed = opt.seed;
    cfg.include_search = !opt.skip_search;
    if (opt.op) cfg.extra_operator = hermitian_operator(*opt.op);

    const verify::VerifySummary s = verify::run_suite(cfg);
    const bool ok = s.all_passed();
    const std::string replay = "uk verify --seed " + std::to_string(s.seed) + " --dims " +
                               std::to_string(s.min_dim) + ".." + std::to_string(s.max_dim) +
                               " --cases ";

    if (opt.json) {
      json rows = json::array();
      for (const auto& st : s.invariants) {
        json failure = nullptr;
        if (st.first_failure)
          failure = {{"case", st.first_failure->case_index},
                     {"dim", st.first_failure->dim},
                     {"detail", st.first_failure->detail}};
        rows.push_back({{"name", st.name},
                        {"passed", st.passed},
                        {"failed", st.failed},
                        {"max_residual", st.max_residual},
                        {"first_failure", failure}});
      }
      emit_json(out, {{"seed", s.seed},
                      {"cases", s.cases},
                      {"dims", {s.min_dim, s.max_dim}},
                      {"all_passed", ok},
                      {"invariants", rows}});
    } else {
      out << "verify: " << s.cases << " cases, dims " << s.min_dim << ".." << s.max_dim
          << ", seed " << s.seed << '\n';
      for (const auto& st : s.invariants) {
        std::string name = st.name;
        name.resize(40, ' ');
        out << (st.failed ? "FAIL " : "ok   ") << name << st.passed << "/" << st.passed + st.failed
            << "   max residual " << fmt(st.max_residual) << '\n';
        if (st.first_failure)
          out << "     first failure: case " << st.first_failure->case_index << " (dim "
              << st.first_failure->dim << "): " << st.first_failure->detail
              << "\n     replay: " << replay << st.first_failure->case_index + 1 << '\n';
      }
      out << (ok ? "all invariants passed\n" : "some invariants FAILED\n");
    }
    return ok ? kOk : kCheckFailed;
  });
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::uint64_t default_seed = 0;
  bool seed_from_env = false;
  if (const char* env = std::getenv("UK_SEED"); env && *env) {
    const std::string_view s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), default_seed);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      err << "error: UK_SEED must be an unsigned integer (got '" << env << "')\n";
      return kInputError;
    }
    seed_from_env = true;
  }

  CLI::App app{
      "Operator decomposition A|psi> = <A>|psi> + dA|perp> and uncertainty relations.\n"
      "Operators are files ({\"dim\", \"matrix\"}) or expressions over id, sx, sy, sz:\n"
      "  expr := term (('+'|'-') term)*;  term := factor ('*' factor)*;\n"
      "  factor := ['-'] atom;  atom := number | i | name | comm(e,e) | acomm(e,e) | dag(e) | (e)\n"
      "UK_SEED sets the default --seed.",
      "uk"};
  app.require_subcommand(1);

  DecomposeOptions dec;
  auto* c_dec = app.add_subcommand("decompose", "Split A|psi> into mean, spread and |perp>");
  c_dec->add_option("--op", dec.op, "Operator file or expression")->required();
  c_dec->add_option("--state", dec.state, "State preset or file")->capture_default_str();
  c_dec->add_flag("--json", dec.json, "Single JSON object on stdout");

  ReportOptions rep;
  rep.seed = default_seed;
  Index random_dim = 0;
  auto* c_rep = app.add_subcommand("report", "Uncertainty identities and bounds for (A, B, psi)");
  c_rep->add_option("--op-a", rep.op_a, "First operator");
  c_rep->add_option("--op-b", rep.op_b, "Second operator");
  c_rep->add_option("--state", rep.state, "State preset or file")->capture_default_str();
  auto* random_opt =
      c_rep->add_option("--random", random_dim, "Use a random operator pair and state of this dim");
  c_rep->add_option("--seed", rep.seed, "Seed for --random");
  c_rep->add_flag("--json", rep.json, "Single JSON object on stdout");

  bool paradox_json = false;
  auto* c_par = app.add_subcommand("paradox", "Reproduce the sx/sy/up_z phase paradox");
  c_par->add_flag("--json", paradox_json, "Single JSON object on stdout");

  SearchOptions search;
  search.seed = default_seed;
  auto* c_search = app.add_subcommand("search", "Find a maximal-spread state and a co-maximizer");
  c_search->add_option("--op", search.op, "Operator file or expression")->required();
  c_search->add_option("--restarts", search.restarts)->capture_default_str();
  c_search->add_option("--max-iters", search.max_iters)->capture_default_str();
  c_search->add_option("--seed", search.seed);
  c_search->add_flag("--json", search.json, "Single JSON object on stdout");

  VerifyOptions ver;
  if (seed_from_env) ver.seed = default_seed;
  std::string verify_op;
  auto* c_ver = app.add_subcommand("verify", "Run the randomized property suite");
  c_ver->add_option("--dims", ver.dims, "Dimension range lo..hi")->capture_default_str();
  c_ver->add_option("--cases", ver.cases)->capture_default_str();
  c_ver->add_option("--seed", ver.seed)->capture_default_str();
  auto* ver_op = c_ver->add_option("--op", verify_op, "Extra operator file or expression");
  c_ver->add_flag("--no-search", ver.skip_search, "Skip the maximal-spread search");
  c_ver->add_flag("--json", ver.json, "Single JSON object on stdout");

  std::vector<const char*> argv{"uk"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  if (*c_dec) return cmd_decompose(dec, out, err);
  if (*c_rep) {
    if (*random_opt) rep.random_dim = random_dim;
    return cmd_report(rep, out, err);
  }
  if (*c_par) return cmd_paradox(paradox_json, out, err);
  if (*c_search) return cmd_search(search, out, err);
  if (*c_ver) {
    if (*ver_op) ver.op = verify_op;
    return cmd_verify(ver, out, err);
  }
  return kInputError;
}

}  // namespace uk::cli
