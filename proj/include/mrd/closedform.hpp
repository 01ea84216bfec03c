#pragma once

// Closed-form values for isotropic and Werner pairs, and small twirled
// programs that recompute them numerically.

#include <string>

#include "mrd/classical.hpp"

namespace mrd {

/// D_alpha over LO, ..., PPT for i(p) against i(q), from the binary
/// isotropic measurement; alpha == 1 and kAlphaInfinity take the limits.
ExtReal iso_measured(int d, double p, double q, double alpha);

enum class WernerTarget { AntiVsSym, AntiVsWerner };

/// Theta-perp against Theta, or against w(q); independent of alpha.
ExtReal werner_measured(int d, double q, WernerTarget target, double alpha);

enum class PairFamily { Isotropic, Werner };

/// Unrestricted D_alpha for a commuting pair of the family: the classical
/// divergence of {p, 1-p} against {q, 1-q}.
ExtReal unrestricted_reference(PairFamily family, int d, double p, double q, double alpha);

struct GapValue {
  ExtReal variational;  // V over SEP and PPT, equal to the unrestricted value
  ExtReal measured;     // iso_measured
  bool valid = false;   // false outside the region where V is known in closed form
  std::string branch;   // "(0,1/2)", "[1/2,1)", "1", "(1,inf)" or "inf"

  /// V - D; +inf when V is infinite and D finite.
  double gap() const;
};

/// Closed-form variational bound and measured value for i(p) against i(q).
/// Regions: alpha < 1/2 needs p = 1; alpha in [1/2,1) needs q = 1; alpha = 1
/// needs q >= p / (d + 1 - p d); alpha > 1 needs
/// q >= p / (k - p (k - 1)) with k = (d + 1)^(1/alpha). alpha = inf is never
/// valid.
GapValue variational_gap_value(int d, double p, double q, double alpha);

enum class ProgramKind {
  IsoPrimal,         // scale-free form over c1 / c2 in (0, d + 1]
  WernerPrimal,      // same for Werner operators, c_anti / c_sym in (0, (d+1)/(d-1)]
  IsoVarGap,         // normalized (c1, c2) form, one coefficient eliminated
  IsoBinaryMeasure,  // best binary isotropic PPT measurement {E, 1 - E}
};

std::string to_string(ProgramKind k);

struct ScalarProgram {
  ProgramKind kind = ProgramKind::IsoPrimal;
  int d = 2;
  double p = 0.0;  // rho = i(p) or w(p)
  double q = 0.0;  // sigma = i(q) or w(q)
  double alpha = 2.0;
};

/// Grid search over about 1e4 points followed by golden-section refinement.
/// The primal kinds return the variational bound, IsoBinaryMeasure the
/// measured value. Throws DomainError for invalid parameters.
ExtReal solve_scalar_program(const ScalarProgram& sp);

}  // namespace mrd
