#include "mrd/bound.hpp"

#include "mrd/io.hpp"

namespace mrd {

std::string to_string(BoundKind k) {
  switch (k) {
    case BoundKind::Exact: return "exact";
    case BoundKind::Lower: return "lower";
    case BoundKind::Upper: return "upper";
    case BoundKind::Heuristic: return "heuristic";
  }
  return "lower";
}

std::string to_string(SolverStatus s) { return s == SolverStatus::Converged ? "converged" : "budget"; }

nlohmann::json certificate_to_json(const DualCertificate& c) {
  return {{"lambda", c.lambda}, {"X", operator_to_json(c.x)}, {"Y", operator_to_json(c.y)},
          {"residual", c.residual}, {"family", c.family}, {"d", c.d}, {"n", c.n}};
}

nlohmann::json bound_to_json(const BoundResult& r) {
  nlohmann::json j = {{"value_nats", number_to_json(r.value.as_double())},
                      {"kind", to_string(r.kind)},
                      {"alpha", number_to_json(r.alpha)},
                      {"class", to_string(r.measurement_class)},
                      {"status", to_string(r.status)},
                      {"iterations", r.iterations}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

}  // namespace mrd
