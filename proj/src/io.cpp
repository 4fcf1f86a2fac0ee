#include "uk/io.hpp"

#include <cmath>
#include <fstream>

namespace uk::io {

namespace {

[[noreturn]] void bad(std::string_view source, const std::string& what) {
  throw IoError(std::string(source) + ": " + what);
}

ComplexScalar complex_from_json(const json& j, std::string_view source) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    bad(source, "complex entries must be [re, im] number pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

Index read_dim(const json& doc, std::string_view source) {
  if (!doc.is_object()) bad(source, "expected a JSON object");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer()) bad(source, "missing integer 'dim'");
  const auto dim = doc["dim"].get<long long>();
  if (dim <= 0) bad(source, "'dim' must be positive");
  return static_cast<Index>(dim);
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError(path.string() + ": malformed JSON (" + e.what() + ")");
  }
}

}  // namespace

json to_json(ComplexScalar c) { return json::array({c.real(), c.imag()}); }

json to_json(const ComplexVector& v) {
  json out = json::array();
  for (Index k = 0; k < v.size(); ++k) out.push_back(to_json(v(k)));
  return out;
}

json operator_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return {{"dim", m.rows()}, {"matrix", std::move(rows)}};
}

json state_to_json(const StateVector& psi) {
  return {{"dim", psi.dim()}, {"amplitudes", to_json(psi.amplitudes())}};
}

ComplexMatrix operator_from_json(const json& doc, std::string_view source) {
  const Index dim = read_dim(doc, source);
  if (!doc.contains("matrix") || !doc["matrix"].is_array()) bad(source, "missing array 'matrix'");
  const json& rows = doc["matrix"];
  if (rows.size() != static_cast<std::size_t>(dim))
    bad(source, "'matrix' must have dim rows");
  ComplexMatrix m(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(dim))
      bad(source, "row " + std::to_string(i) + " must have dim entries");
    for (Index j = 0; j < dim; ++j) m(i, j) = complex_from_json(row[static_cast<std::size_t>(j)], source);
  }
  if (!m.allFinite()) bad(source, "non-finite matrix entry");
  return m;
}

LoadedState state_from_json(const json& doc, std::string_view source) {
  const Index dim = read_dim(doc, source);
  if (!doc.contains("amplitudes") || !doc["amplitudes"].is_array())
    bad(source, "missing array 'amplitudes'");
  const json& amps = doc["amplitudes"];
  if (amps.size() != static_cast<std::size_t>(dim)) bad(source, "'amplitudes' must have dim entries");
  ComplexVector v(dim);
  for (Index k = 0; k < dim; ++k) v(k) = complex_from_json(amps[static_cast<std::size_t>(k)], source);
  if (!v.allFinite()) bad(source, "non-finite amplitude");
  const double norm = v.norm();
  try {
    return {StateVector(v), std::abs(norm - 1.0)};
  } catch (const ZeroVector&) {
    bad(source, "zero state vector");
  }
}

ComplexMatrix load_operator_file(const std::filesystem::path& path) {
  return operator_from_json(read_json(path), path.string());
}

LoadedState load_state_file(const std::filesystem::path& path) {
  return state_from_json(read_json(path), path.string());
}

void save_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw IoError(path.string() + ": cannot write file");
  out << doc.dump(2) << '\n';
}

std::optional<StateVector> state_preset(std::string_view name) {
  const double h = 1.0 / std::sqrt(2.0);
  if (name == "up_z") return StateVector{1.0, 0.0};
  if (name == "down_z") return StateVector{0.0, 1.0};
  if (name == "plus_x") return StateVector{h, h};
  if (name == "plus_y") return StateVector{ComplexScalar(h), ComplexScalar(0, h)};
  return std::nullopt;
}

}  // namespace uk::io
