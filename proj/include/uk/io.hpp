#pragma once

// Operator and state files. Complex numbers are [re, im] pairs everywhere.
//
//   operator: {"dim": 2, "matrix": [[[0,0],[1,0]], [[1,0],[0,0]]]}
//   state:    {"dim": 2, "amplitudes": [[1,0],[0,0]]}

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "uk/linalg.hpp"

namespace uk::io {

using json = nlohmann::json;

json to_json(ComplexScalar c);
json to_json(const ComplexVector& v);
json operator_to_json(const ComplexMatrix& m);
json state_to_json(const StateVector& psi);

/// `source` names the origin in error messages. Throws IoError on any schema
/// violation.
ComplexMatrix operator_from_json(const json& doc, std::string_view source);

struct LoadedState {
  StateVector state;
  double norm_defect;  // |‖v‖ - 1| of the amplitudes as written
};

LoadedState state_from_json(const json& doc, std::string_view source);

ComplexMatrix load_operator_file(const std::filesystem::path& path);
LoadedState load_state_file(const std::filesystem::path& path);
void save_json(const std::filesystem::path& path, const json& doc);

/// up_z, down_z, plus_x, plus_y
std::optional<StateVector> state_preset(std::string_view name);

}  // namespace uk::io
