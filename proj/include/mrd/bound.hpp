#pragma once

// Result records shared by the solvers.

#include <json.hpp>

#include <optional>
#include <string>

#include "mrd/classical.hpp"
#include "mrd/linops.hpp"
#include "mrd/povm.hpp"

namespace mrd {

enum class BoundKind { Exact, Lower, Upper, Heuristic };
enum class SolverStatus { Converged, Budget };

std::string to_string(BoundKind k);
std::string to_string(SolverStatus s);

/// lambda * sigma - rho = X + Y^Gamma with X, Y >= 0.
struct DualCertificate {
  double lambda = 0.0;
  HermitianOp x;
  HermitianOp y;
  double residual = 0.0;  // max-norm of lambda sigma - rho - X - Y^Gamma
  std::string family;     // empty for numerically found certificates
  int d = 0;
  int n = 0;
};

nlohmann::json certificate_to_json(const DualCertificate& c);

struct BoundResult {
  ExtReal value;  // nats, except for fidelity bounds which are plain numbers
  BoundKind kind = BoundKind::Lower;
  double alpha = 0.0;
  MeasurementClass measurement_class = MeasurementClass::ALL;
  SolverStatus status = SolverStatus::Converged;
  int iterations = 0;
  std::optional<Povm> povm;
  std::optional<HermitianOp> omega;
  std::optional<DualCertificate> certificate;
  std::string note;
};

/// {value_nats, kind, alpha, class, status, iterations} plus "note" when set.
nlohmann::json bound_to_json(const BoundResult& r);

}  // namespace mrd
