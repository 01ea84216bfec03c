#include "mrd/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "mrd/errors.hpp"
#include "mrd/optim.hpp"
#include "mrd/states.hpp"

namespace mrd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAlphaCap = 1e6;

void require_family(int d, double q) {
  if (d < 2) throw DomainError("local dimension must be at least 2, got " + std::to_string(d));
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("q must lie in [0,1], got " + std::to_string(q));
}

double preset_value(ExponentPreset preset, int d, double q) {
  switch (preset) {
    case ExponentPreset::PhiVsIso: return std::log((d + 1.0) / (q * d + 1.0));
    case ExponentPreset::PhiVsPerp: return std::log(d + 1.0);
    case ExponentPreset::AntiVsWerner: return std::log((d + 1.0) / (d + 1.0 - 2.0 * q));
  }
  return kNaN;
}

double expectation(const Matrix& state, const Matrix& op) {
  return std::clamp((state.cwiseProduct(op.conjugate())).sum().real(), 0.0, 1.0);
}

}  // namespace

TestReport evaluate_test(const DensityOp& rho, const DensityOp& sigma, int n, const Povm& test) {
  if (n < 1) throw DomainError("number of copies must be at least 1");
  if (test.size() == 0) throw StructuralError("empty test");
  if (rho.dim() != sigma.dim()) throw StructuralError("rho and sigma have different dimensions");
  const DensityOp rho_n = tensor_power(rho, n), sigma_n = tensor_power(sigma, n);
  if (test.dim() != rho_n.dim())
    throw StructuralError("test acts on dimension " + std::to_string(test.dim()) + ", the " + std::to_string(n) +
                          "-copy states on " + std::to_string(rho_n.dim()));
  const Matrix& t = test.elements().front().matrix();
  TestReport r;
  r.n = n;
  r.alpha_err = 1.0 - expectation(rho_n.matrix(), t);
  r.beta_err = expectation(sigma_n.matrix(), t);
  r.test = test;
  return r;
}

bool error_tradeoff_bound(const TestReport& report, double divergence_nats, double alpha) {
  if (!(alpha > 1.0)) throw DomainError("the trade-off bound needs alpha > 1");
  if (report.alpha_err >= 1.0) throw DomainError("type-I error equals 1; the trade-off bound is undefined");
  if (report.beta_err <= 0.0) return std::isinf(divergence_nats);
  const double lhs = -std::log(report.beta_err);
  const double rhs = divergence_nats + (std::isinf(alpha) ? 1.0 : alpha / (alpha - 1.0)) *
                                           -std::log1p(-report.alpha_err);
  return lhs <= rhs + 1e-12 * std::max(1.0, std::abs(rhs));
}

DivergenceCurve constant_curve(double nats, std::string provenance) {
  return {[nats](double) { return nats; }, std::move(provenance), true};
}

DivergenceCurve curve_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("points")) throw ValidationError("curve needs a \"points\" array");
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : j.at("points")) {
    if (p.is_array() && p.size() == 2)
      pts.emplace_back(p[0].get<double>(), p[1].get<double>());
    else if (p.is_object())
      pts.emplace_back(p.at("alpha").get<double>(), p.at("value").get<double>());
    else
      throw ValidationError("curve point must be [alpha, nats] or {alpha, value}");
  }
  if (pts.empty()) throw ValidationError("curve has no points");
  std::sort(pts.begin(), pts.end());
  bool constant = true;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!(pts[i].first > 1.0)) throw ValidationError("curve alphas must exceed 1");
    if (i > 0 && pts[i].second < pts[i - 1].second - 1e-9)
      throw ValidationError("curve decreases at alpha = " + std::to_string(pts[i].first));
    if (std::abs(pts[i].second - pts[0].second) > 1e-12) constant = false;
  }
  DivergenceCurve c;
  c.provenance = j.value("provenance", std::string("curve-file"));
  c.constant = constant;
  c.evaluator = [pts](double a) {
    if (a <= pts.front().first) return pts.front().second;
    if (a >= pts.back().first) return pts.back().second;
    const auto hi = std::lower_bound(pts.begin(), pts.end(), std::make_pair(a, -kInf));
    const auto lo = hi - 1;
    const double w = (a - lo->first) / (hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
  };
  return c;
}

std::string to_string(ExponentPreset p) {
  switch (p) {
    case ExponentPreset::PhiVsIso: return "phi_vs_iso";
    case ExponentPreset::PhiVsPerp: return "phi_vs_perp";
    case ExponentPreset::AntiVsWerner: return "anti_vs_werner";
  }
  return "unknown";
}

ExponentPreset exponent_preset_from_string(const std::string& s) {
  std::string t = s;
  std::replace(t.begin(), t.end(), '-', '_');
  if (t == "phi_vs_iso") return ExponentPreset::PhiVsIso;
  if (t == "phi_vs_perp") return ExponentPreset::PhiVsPerp;
  if (t == "anti_vs_werner") return ExponentPreset::AntiVsWerner;
  throw DomainError("unknown exponent preset '" + s + "'");
}

DivergenceCurve preset_curve(ExponentPreset preset, int d, double q) {
  require_family(d, q);
  return constant_curve(preset_value(preset, d, q), "closedform:" + to_string(preset));
}

bool preset_valid(ExponentPreset preset, int d, double q) {
  require_family(d, q);
  switch (preset) {
    case ExponentPreset::PhiVsIso: return q <= 1.0 / (double(d) * d) + 1e-15;
    case ExponentPreset::PhiVsPerp: return true;
    case ExponentPreset::AntiVsWerner: return q >= (d + 1.0) / (d + 2.0) - 1e-15;
  }
  return false;
}

ExponentResult stein_exponent(ExponentPreset preset, int d, double q) {
  ExponentResult r;
  r.provenance = "closedform:" + to_string(preset);
  r.valid = preset_valid(preset, d, q);
  r.certified = r.valid;
  r.value = r.valid ? preset_value(preset, d, q) : kNaN;
  return r;
}

ExponentResult stein_exponent(const DivergenceCurve& curve, bool additivity_attested) {
  ExponentResult r;
  r.provenance = curve.provenance;
  r.valid = true;
  r.certified = additivity_attested;
  r.value = curve(std::nextafter(1.0, 2.0));
  return r;
}

ExponentResult strong_converse_exponent(double r, const DivergenceCurve& curve) {
  if (!(r >= 0.0)) throw DomainError("rate must be nonnegative");
  ExponentResult out;
  out.provenance = curve.provenance;
  out.valid = true;
  if (curve.constant) {
    const double d = curve(2.0);
    out.clipped = r < d;
    out.value = out.clipped ? 0.0 : r - d;
    out.alpha_star = out.clipped ? 1.0 : kInf;
    return out;
  }
  // alpha = 1 + e^u spreads the search over both ends of (1, cap].
  const auto g = [&](double u) {
    const double a = 1.0 + std::exp(u);
    return (a - 1.0) / a * (r - curve(a));
  };
  const ScalarMax best = grid_then_golden_max(g, -30.0, std::log(kAlphaCap - 1.0), 4000);
  out.clipped = best.value < 0.0;
  out.value = std::max(0.0, best.value);
  out.alpha_star = out.clipped ? 1.0 : 1.0 + std::exp(best.x);
  return out;
}

ExponentResult strong_converse_exponent(double r, ExponentPreset preset, int d, double q) {
  if (!(r >= 0.0)) throw DomainError("rate must be nonnegative");
  ExponentResult out = stein_exponent(preset, d, q);
  if (!out.valid) return out;
  const double dv = out.value;
  out.clipped = r < dv;
  out.value = out.clipped ? 0.0 : r - dv;
  out.alpha_star = out.clipped ? 1.0 : kInf;
  return out;
}

}  // namespace mrd
