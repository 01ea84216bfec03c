#pragma once

// Cone-constrained variational bounds on measured Renyi divergences.
//
// The solver maximizes the scale-invariant objective along a log-det barrier
// path (damped Newton steps) over
// {omega : tr omega = dim, omega >= delta * 1, omega in cone}.

#include <json.hpp>

#include <cstdint>

#include "mrd/bound.hpp"
#include "mrd/linops.hpp"

namespace mrd {

enum class ConeKind { PSD, PPT, SEPInner };

struct ConeSpec {
  ConeKind kind = ConeKind::PPT;
  double delta = 1e-8;      // must lie in [1e-10, 1e-4]
  int sep_terms = 0;        // product terms for SEPInner; 0 means d_A * d_B
};

std::string to_string(ConeKind k);

struct SolverConfig {
  int max_iter = 3000;
  double tol = 1e-9;  // relative improvement below which the ascent stops
  int restarts = 1;
  std::uint64_t seed = 1;
};

/// Reads {delta, max_iter, tol, restarts, seed}; absent fields keep defaults.
SolverConfig solver_config_from_json(const nlohmann::json& j, ConeSpec& cone);
nlohmann::json solver_config_to_json(const SolverConfig& cfg, const ConeSpec& cone);

enum class Objective { Nu, Eta };

/// nu is the additive form, eta the scale-invariant form; both are to be
/// maximized. Throws DomainError unless omega is positive definite.
double objective(const DensityOp& rho, const DensityOp& sigma, const HermitianOp& omega, double alpha,
                 Objective form);

/// Scale factor lambda* for which nu(lambda* omega) equals eta(omega).
double optimal_scale(const DensityOp& rho, const DensityOp& sigma, const HermitianOp& omega, double alpha);

struct VarResult {
  ExtReal value;                 // eta at the returned omega
  double nu_at_scale = 0.0;      // nu at optimal_scale * omega
  double value_tenth_delta = 0;  // re-solve with delta / 10, warm started
  HermitianOp omega;
  Objective objective = Objective::Eta;
  SolverStatus status = SolverStatus::Budget;
  BoundKind kind = BoundKind::Upper;
  int iterations = 0;
};

VarResult variational_bound(const DensityOp& rho, const DensityOp& sigma, double alpha, const ConeSpec& cone,
                            const SolverConfig& cfg = {});

struct SearchConfig {
  int restarts = 32;
  int max_evals = 2000;
  std::uint64_t seed = 1;
  double tol = 1e-12;
};

/// Projective local (or one-way conditional) measurements in local
/// eigenbases, with the inner scaling solved in closed form.
BoundResult plo_exact(const DensityOp& rho, const DensityOp& sigma, double alpha, MeasurementClass cls,
                      const SearchConfig& cfg = {});

}  // namespace mrd
