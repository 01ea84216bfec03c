#pragma once

// Bipartite state families on d x d (party B = subsystem 1), twirls and
// tensor powers.

#include <string>

#include "mrd/linops.hpp"

namespace mrd {

enum class Family { MaxEntangled, PhiPerp, Symmetric, Antisymmetric, Isotropic, Werner, Raw };

struct IsotropicCoords {
  int d = 2;
  double p = 0.0;
  /// Separable (equivalently PPT) iff p <= 1/d.
  bool ppt() const { return p <= 1.0 / d + 1e-12; }
};

struct WernerCoords {
  int d = 2;
  double p = 0.0;
  /// Separable (equivalently PPT) iff p >= 1/2.
  bool ppt() const { return p >= 0.5 - 1e-12; }
};

/// Unnormalized operators on d x d.
HermitianOp swap_operator(int d);
HermitianOp max_entangled_projector(int d);  // d * Phi
HermitianOp symmetric_projector(int d);
HermitianOp antisymmetric_projector(int d);

DensityOp max_entangled(int d);
DensityOp phi_perp(int d);
DensityOp symmetric_state(int d);
DensityOp antisymmetric_state(int d);
DensityOp isotropic(const IsotropicCoords& c);
DensityOp werner(const WernerCoords& c);

/// Builds a family member; `param` is used by Isotropic and Werner only.
DensityOp make_state(Family family, int d, double param = 0.0);

/// Parses "phi", "phi-perp", "sym", "antisym", "iso:p", "werner:p" or
/// "raw:<file>" (JSON matrix).
DensityOp make_state(const std::string& spec, int d);

/// (1 - eps) rho + eps * 1/D.
DensityOp full_support_mix(const DensityOp& rho, double eps);

/// rho^{(x)n} reordered as A1..An B1..Bn with B = {n..2n-1}.
DensityOp tensor_power(const DensityOp& rho, int n);
HermitianOp tensor_power(const HermitianOp& x, int n);

enum class TwirlKind { Isotropic, Werner };

/// Projection onto the commutant of U(x)conj(U) (isotropic) or U(x)U (Werner).
HermitianOp twirl(const HermitianOp& x, TwirlKind kind);

}  // namespace mrd
