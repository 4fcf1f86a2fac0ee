#pragma once

// Command-line front end. Every command writes its report to `out` and
// diagnostics to `err`, and returns a process exit code.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uk/linalg.hpp"

namespace uk::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,  // verification or self-check failure
  kInputError = 2,   // parse or IO error
  kDomainError = 3,  // dimension or Hermiticity error
};

/// File path if one exists, otherwise an operator expression.
ComplexMatrix resolve_operator(const std::string& spec);

/// Preset name (up_z, down_z, plus_x, plus_y) or state file. Warns on `err`
/// when a file needed renormalizing by more than 1e-6.
StateVector resolve_state(const std::string& spec, std::ostream& err);

/// "2..12" or "5".
std::pair<Index, Index> parse_dim_range(std::string_view text);

/// "0", "2i", "-i", "0.5+1.5i" at 12 significant digits.
std::string format_complex(std::complex<double> z);

struct ParadoxOutcome {
  std::complex<double> naive;      // reusing σx's residual direction for σy
  std::complex<double> direct;     // ⟨↑z|[σx,σy]|↑z⟩
  std::complex<double> via_phase;  // 2i Δσx Δσy sin φ
  std::complex<double> exp_i_phi;
  double spread_a;
  double spread_b;
  double phi;
  bool self_check;  // corrected agrees with direct, naive does not
};

ParadoxOutcome compute_paradox();

struct DecomposeOptions {
  std::string op;
  std::string state = "up_z";
  bool json = false;
};

struct ReportOptions {
  std::string op_a;
  std::string op_b;
  std::string state = "up_z";
  std::optional<Index> random_dim;
  std::uint64_t seed = 0;
  bool json = false;
};

struct SearchOptions {
  std::string op;
  int restarts = 8;
  int max_iters = 2000;
  std::uint64_t seed = 0;
  bool json = false;
};

struct VerifyOptions {
  std::string dims = "2..12";
  int cases = 500;
  std::uint64_t seed = 42;
  std::optional<std::string> op;
  bool skip_search = false;
  bool json = false;
};

int cmd_decompose(const DecomposeOptions& opt, std::ostream& out, std::ostream& err);
int cmd_report(const ReportOptions& opt, std::ostream& out, std::ostream& err);
int cmd_paradox(bool json, std::ostream& out, std::ostream& err);
int cmd_search(const SearchOptions& opt, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err);

/// Full argument parsing and dispatch; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace uk::cli
