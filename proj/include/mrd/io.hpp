#pragma once

// JSON exchange for operators: {dims, b_indices, re, im}, row-major.

#include <json.hpp>

#include "mrd/linops.hpp"

namespace mrd {

nlohmann::json operator_to_json(const HermitianOp& x);
HermitianOp operator_from_json(const nlohmann::json& j);

/// Finite values as numbers, +inf as the string "inf".
nlohmann::json number_to_json(double v);
double number_from_json(const nlohmann::json& j);

}  // namespace mrd
