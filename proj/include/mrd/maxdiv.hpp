#pragma once

// Max-divergences: the unrestricted quantum value, the PPT-measured value
// from both sides, and closed-form dual certificates for symmetric families.

#include <string>

#include "mrd/bound.hpp"
#include "mrd/varprog.hpp"

namespace mrd {

/// log lambda_max(sigma^-1/2 rho sigma^-1/2) on supp(sigma); +inf when rho
/// leaves the support.
ExtReal quantum_max_divergence(const DensityOp& rho, const DensityOp& sigma);

struct MaxDivConfig {
  SolverConfig primal;
  ConeSpec cone;                   // kind is forced to PPT
  double rel_width = 1e-6;         // bisection stops at (hi - lo) / hi below this
  int newton_max_iter = 400;       // per feasibility probe
  double bracket_cap = 1099511627776.0;  // 2^40, ratio to the starting lambda
  double lambda_lo = 0.0;          // > 0 skips the primal solve for the bracket
};

/// Barrier ascent of log tr[rho omega] - log tr[sigma omega] over the PPT
/// cone. Any feasible omega gives a two-outcome PPT test, so kind = lower.
BoundResult ppt_max_primal(const DensityOp& rho, const DensityOp& sigma, const MaxDivConfig& cfg = {});

/// Largest total dimension the dual accepts; the Newton system has N^2 + 1
/// unknowns.
inline constexpr int kMaxDualDimension = 36;

/// Bisection on lambda. Each probe asks for Y >= 0 with
/// lambda sigma - rho - Y^Gamma >= 0 through a phase-one barrier method on
/// the common margin, so a feasible probe yields X = lambda sigma - rho - Y^Gamma
/// exactly. Kind = upper, with the certificate at the final feasible lambda.
/// Throws SolverError("dual-bracket-failed") when no feasible lambda is found
/// below the cap, ResourceError above kMaxDualDimension.
BoundResult ppt_max_dual(const DensityOp& rho, const DensityOp& sigma, const MaxDivConfig& cfg = {});

enum class CertFamily { PhiVsPerp, AntiVsSym, Isotropic, Werner };

std::string to_string(CertFamily f);
CertFamily cert_family_from_string(const std::string& s);

struct CertCheck {
  bool pass = false;
  double min_eig_x = 0.0;
  double min_eig_y = 0.0;
  double residual = 0.0;
};

/// Checks X, Y >= -tol and max|lambda sigma - rho - X - Y^Gamma| <= tol.
CertCheck check_certificate(const DualCertificate& c, const DensityOp& rho, const DensityOp& sigma,
                            double tol = 1e-9, double eig_tol = 1e-10);

/// The states a family certificate talks about, as n-copy tensor powers.
std::pair<DensityOp, DensityOp> certificate_states(CertFamily f, int d, int n, double p = 0.0, double q = 0.0);

/// Builds (lambda, X = 0, Y) from the single-copy partial transposes, written
/// in terms of the identity and the swap. p, q are read for Isotropic and
/// Werner only. Throws DomainError naming the failed case when (p, q) lies
/// outside every additivity case, ValidationError when the built certificate
/// fails check_certificate.
DualCertificate explicit_certificate(CertFamily f, int d, int n, double p = 0.0, double q = 0.0);

}  // namespace mrd
