#pragma once

// Error probabilities of binary tests and the Stein and strong-converse
// exponents built from alpha-indexed divergence curves.

#include <functional>
#include <string>

#include <json.hpp>

#include "mrd/povm.hpp"

namespace mrd {

struct TestReport {
  int n = 1;
  double alpha_err = 0.0;  // 1 - tr[rho^{(x)n} T], type I
  double beta_err = 0.0;   // tr[sigma^{(x)n} T], type II
  Povm test;
};

/// Element 0 of `test` is the accepting operator T. rho and sigma are single
/// copies; their n-th tensor powers must match the test dimension
/// (StructuralError otherwise).
TestReport evaluate_test(const DensityOp& rho, const DensityOp& sigma, int n, const Povm& test);

/// -log beta <= D + alpha/(alpha-1) log(1/(1 - alpha_err)), with D the
/// divergence of the n-copy pair in nats (n times the single-copy value for
/// additive instances). alpha must exceed 1. Throws DomainError when
/// alpha_err = 1, where the right side is undefined.
bool error_tradeoff_bound(const TestReport& report, double divergence_nats, double alpha);

/// Per-copy divergence as a function of alpha > 1, in nats.
struct DivergenceCurve {
  std::function<double(double)> evaluator;
  std::string provenance;
  bool constant = false;  // the value does not depend on alpha

  double operator()(double alpha) const { return evaluator(alpha); }
};

DivergenceCurve constant_curve(double nats, std::string provenance);

/// {"provenance": ..., "points": [[alpha, nats], ...]} or points given as
/// {"alpha": a, "value": v}. Linear interpolation in alpha, flat beyond the
/// ends. Throws ValidationError for fewer than one point, alpha <= 1 or a
/// curve that decreases by more than 1e-9.
DivergenceCurve curve_from_json(const nlohmann::json& j);

enum class ExponentPreset { PhiVsIso, PhiVsPerp, AntiVsWerner };

std::string to_string(ExponentPreset p);
ExponentPreset exponent_preset_from_string(const std::string& s);

struct ExponentResult {
  double value = 0.0;    // nats; NaN when !valid
  bool valid = false;    // parameters inside the region where the value is proven
  bool certified = false;  // additivity attested, so the value is the exponent itself
  bool clipped = false;  // strong converse with r below the curve, clipped to 0
  double alpha_star = 0.0;  // maximizing alpha for strong converse; inf in the limit
  std::string provenance;
};

/// Per-copy measured divergence of the preset pair; constant in alpha.
/// PhiVsIso is Phi against i(q), PhiVsPerp Phi against Phi-perp, AntiVsWerner
/// the antisymmetric state against w(q). Throws DomainError for d < 2 or q
/// outside [0,1].
DivergenceCurve preset_curve(ExponentPreset preset, int d, double q = 0.0);

/// Region check: q <= 1/d^2 for PhiVsIso, q >= (d+1)/(d+2) for AntiVsWerner.
bool preset_valid(ExponentPreset preset, int d, double q = 0.0);

/// Stein exponent of a preset; valid = false (value NaN) outside its region.
ExponentResult stein_exponent(ExponentPreset preset, int d, double q = 0.0);

/// Curve value as alpha -> 1+. Without an additivity attestation the result
/// is only an achievable rate (certified = false).
ExponentResult stein_exponent(const DivergenceCurve& curve, bool additivity_attested);

/// sup over alpha in (1, 1e6] of (alpha-1)/alpha (r - D(alpha)). Constant
/// curves use the limit alpha -> inf, giving max(0, r - D). Negative values
/// clip to 0. Throws DomainError for r < 0.
ExponentResult strong_converse_exponent(double r, const DivergenceCurve& curve);

/// Preset form: r - D when r >= D, 0 with clipped = true otherwise.
ExponentResult strong_converse_exponent(double r, ExponentPreset preset, int d, double q = 0.0);

}  // namespace mrd
