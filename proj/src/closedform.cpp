#include "mrd/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "mrd/errors.hpp"
#include "mrd/optim.hpp"

namespace mrd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kLogFloor = -700.0;
constexpr double kLogCeil = 700.0;
constexpr int kGridPoints = 10000;

void require_dimension(int d) {
  if (d < 2) throw DomainError("local dimension must be at least 2, got " + std::to_string(d));
}

void require_probability(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(name) + " must lie in [0,1], got " + std::to_string(x));
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive, got " + std::to_string(alpha));
}

bool is_one(double x) { return std::abs(x - 1.0) <= 1e-12; }

// log(a e^x + b e^y) with zero weights dropped.
double log_mix(double a, double x, double b, double y) {
  const double lx = a > 0.0 ? std::log(a) + x : kNegInf;
  const double ly = b > 0.0 ? std::log(b) + y : kNegInf;
  const double m = std::max(lx, ly);
  if (m == kNegInf) return kNegInf;
  return m + std::log(std::exp(lx - m) + std::exp(ly - m));
}

enum class Branch { Small, Middle, One, Infinity };

Branch branch_of(double alpha) {
  if (std::isinf(alpha)) return Branch::Infinity;
  if (alpha == 1.0) return Branch::One;
  return alpha < 0.5 ? Branch::Small : Branch::Middle;
}

// Scale-free objective for omega = t on block B and 1 on the other block, with
// s = log t. rho puts weight a on B, sigma weight b.
double two_block_eta(double a, double b, double alpha, double s) {
  double v = 0.0;
  switch (branch_of(alpha)) {
    case Branch::Small: {
      const double beta = alpha / (alpha - 1.0);
      v = beta * log_mix(a, s, 1.0 - a, 0.0) - log_mix(b, beta * s, 1.0 - b, 0.0);
      break;
    }
    case Branch::Middle: {
      const double gamma = (alpha - 1.0) / alpha;
      v = alpha / (alpha - 1.0) * log_mix(a, gamma * s, 1.0 - a, 0.0) - log_mix(b, s, 1.0 - b, 0.0);
      break;
    }
    case Branch::One:
      v = (a > 0.0 ? a * s : 0.0) - log_mix(b, s, 1.0 - b, 0.0);
      break;
    case Branch::Infinity:
      v = log_mix(a, s, 1.0 - a, 0.0) - log_mix(b, s, 1.0 - b, 0.0);
      break;
  }
  return std::isnan(v) ? kNegInf : v;
}

// Slope of log(w e^{x s} + 1 - w) as s -> -inf.
double term_slope(double w, double x) {
  if (x > 0.0) return is_one(w) ? x : 0.0;
  return w > 0.0 ? x : 0.0;
}

// Coefficient of s in two_block_eta as s -> -inf. A negative slope means the
// supremum is +inf.
double asymptotic_slope(double a, double b, double alpha) {
  switch (branch_of(alpha)) {
    case Branch::Small: {
      const double beta = alpha / (alpha - 1.0);
      return beta * term_slope(a, 1.0) - term_slope(b, beta);
    }
    case Branch::Middle:
      return alpha / (alpha - 1.0) * term_slope(a, (alpha - 1.0) / alpha) - term_slope(b, 1.0);
    case Branch::One:
      return a - term_slope(b, 1.0);
    case Branch::Infinity:
      return term_slope(a, 1.0) - term_slope(b, 1.0);
  }
  return 0.0;
}

ExtReal two_block_program(double a, double b, double alpha, double ratio_cap) {
  if (asymptotic_slope(a, b, alpha) < 0.0) return ExtReal::inf();
  const auto f = [&](double s) { return two_block_eta(a, b, alpha, s); };
  return ExtReal::finite(grid_then_golden_max(f, kLogFloor, std::log(ratio_cap), kGridPoints).value);
}

// Normalized form: sigma-normalized for alpha >= 1/2, rho-normalized below.
// The weights (w1, w2) of the normalizing state fix c2 from c1, except when
// w2 = 0, where c1 = 1 and c2 >= 1/(d+1) is free.
ExtReal iso_var_gap(int d, double p, double q, double alpha) {
  const Branch br = branch_of(alpha);
  const double w1 = br == Branch::Small ? p : q;
  const double w2 = 1.0 - w1;
  const double cap = d + 1.0;

  // Objective in terms of (log c1, log c2); returns the candidate value of V.
  const auto value = [&](double l1, double l2) -> double {
    double v = 0.0;
    switch (br) {
      case Branch::Small: {
        const double beta = alpha / (alpha - 1.0);
        v = -log_mix(q, beta * l1, 1.0 - q, beta * l2);
        break;
      }
      case Branch::Middle: {
        const double gamma = (alpha - 1.0) / alpha;
        v = alpha / (alpha - 1.0) * log_mix(p, gamma * l1, 1.0 - p, gamma * l2);
        break;
      }
      case Branch::One:
        v = (p > 0.0 ? p * l1 : 0.0) + (p < 1.0 ? (1.0 - p) * l2 : 0.0);
        break;
      case Branch::Infinity:
        v = log_mix(p, l1, 1.0 - p, l2);
        break;
    }
    return std::isnan(v) ? kNegInf : v;
  };

  if (w2 <= 1e-15) {
    const auto f = [&](double u) { return value(0.0, u); };
    const double grid = grid_then_golden_max(f, -std::log(cap), kLogCeil, kGridPoints).value;
    // Every branch is monotone in c2 here; the limit c2 -> inf is explicit.
    double limit = kNegInf;
    switch (br) {
      case Branch::Small:
        limit = q > 0.0 ? -std::log(q) : std::numeric_limits<double>::infinity();
        break;
      case Branch::Middle:
        if (alpha > 1.0)
          limit = p < 1.0 ? std::numeric_limits<double>::infinity() : 0.0;
        else
          limit = p > 0.0 ? alpha / (alpha - 1.0) * std::log(p) : std::numeric_limits<double>::infinity();
        break;
      case Branch::One:
      case Branch::Infinity:
        limit = p < 1.0 ? std::numeric_limits<double>::infinity() : 0.0;
        break;
    }
    if (std::isinf(limit) && limit > 0) return ExtReal::inf();
    return ExtReal::finite(std::max(grid, limit));
  }

  const double c1_max = cap / (1.0 + d * w1);
  const auto f = [&](double l1) {
    const double c2 = (1.0 - w1 * std::exp(l1)) / w2;
    return c2 > 0.0 ? value(l1, std::log(c2)) : kNegInf;
  };
  return ExtReal::finite(grid_then_golden_max(f, kLogFloor, std::log(c1_max), kGridPoints).value);
}

// Best binary PPT test {E, 1 - E} with E = e1 Phi + e2 (1 - Phi). Both E and
// 1 - E have positive partial transpose iff e1 <= (d+1) e2 and
// 1 - e1 <= (d+1)(1 - e2); e2 is parametrized across that band.
ExtReal iso_binary_measure(int d, double p, double q, double alpha) {
  const double k = d + 1.0;
  bool infinite = false;
  const auto f = [&](double x, double y) {
    const double lo = x / k, hi = (d + x) / k;
    const double e2 = lo + y * (hi - lo);
    const double pe = p * x + (1.0 - p) * e2, qe = q * x + (1.0 - q) * e2;
    const FiniteMeasure mu({std::clamp(pe, 0.0, 1.0), std::clamp(1.0 - pe, 0.0, 1.0)});
    const FiniteMeasure nu({std::clamp(qe, 0.0, 1.0), std::clamp(1.0 - qe, 0.0, 1.0)});
    const ExtReal r = renyi(mu, nu, alpha);
    if (r.infinite) infinite = true;
    return r.infinite ? kNegInf : r.value;
  };
  constexpr int n = 101;
  double best = kNegInf, bx = 0.0, by = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = double(i) / (n - 1), y = double(j) / (n - 1);
      const double v = f(x, y);
      if (v > best) best = v, bx = x, by = y;
    }
  if (infinite) return ExtReal::inf();
  // Alternating golden refinement around the best node.
  const double h = 1.0 / (n - 1);
  for (int sweep = 0; sweep < 4; ++sweep) {
    const ScalarMax rx = golden_section_max([&](double x) { return f(x, by); }, std::max(0.0, bx - h),
                                            std::min(1.0, bx + h));
    if (rx.value > best) best = rx.value, bx = rx.x;
    const ScalarMax ry = golden_section_max([&](double y) { return f(bx, y); }, std::max(0.0, by - h),
                                            std::min(1.0, by + h));
    if (ry.value > best) best = ry.value, by = ry.x;
  }
  return ExtReal::finite(best);
}

}  // namespace

ExtReal iso_measured(int d, double p, double q, double alpha) {
  require_dimension(d);
  require_probability(p, "p");
  require_probability(q, "q");
  require_alpha(alpha);
  const double inv_d = 1.0 / d;
  const double pb = p + inv_d, qb = q + inv_d;  // both positive
  const double pr = 1.0 - p, qr = 1.0 - q;
  const double w = d / (d + 1.0);

  if (std::isinf(alpha)) {
    double m = std::log(pb / qb);
    if (pr > 0.0) {
      if (qr <= 0.0) return ExtReal::inf();
      m = std::max(m, std::log(pr / qr));
    }
    return ExtReal::finite(m);
  }
  if (alpha == 1.0) {
    double s = pb * std::log(pb / qb);
    if (pr > 0.0) {
      if (qr <= 0.0) return ExtReal::inf();
      s += pr * std::log(pr / qr);
    }
    return ExtReal::finite(w * s);
  }
  double tail = 0.0;
  if (pr > 0.0) {
    if (qr > 0.0)
      tail = std::pow(pr, alpha) * std::pow(qr, 1.0 - alpha);
    else if (alpha > 1.0)
      return ExtReal::inf();
  }
  const double qa = w * (std::pow(pb, alpha) * std::pow(qb, 1.0 - alpha) + tail);
  return ExtReal::finite(std::log(qa) / (alpha - 1.0));
}

ExtReal werner_measured(int d, double q, WernerTarget target, double alpha) {
  require_dimension(d);
  require_probability(q, "q");
  require_alpha(alpha);
  if (target == WernerTarget::AntiVsSym) return ExtReal::finite(std::log((d + 1.0) / (d - 1.0)));
  return ExtReal::finite(std::log((d + 1.0) / (d + 1.0 - 2.0 * q)));
}

ExtReal unrestricted_reference(PairFamily, int d, double p, double q, double alpha) {
  require_dimension(d);
  require_probability(p, "p");
  require_probability(q, "q");
  require_alpha(alpha);
  return renyi(FiniteMeasure({p, 1.0 - p}), FiniteMeasure({q, 1.0 - q}), alpha);
}

double GapValue::gap() const {
  if (!valid) return kNaN;
  if (variational.infinite) return measured.infinite ? kNaN : std::numeric_limits<double>::infinity();
  return variational.value - measured.value;
}

GapValue variational_gap_value(int d, double p, double q, double alpha) {
  GapValue g;
  g.measured = iso_measured(d, p, q, alpha);
  g.variational = {kNaN, false};
  constexpr double tol = 1e-12;
  if (std::isinf(alpha)) {
    g.branch = "inf";
    g.valid = false;
  } else if (alpha < 0.5) {
    g.branch = "(0,1/2)";
    g.valid = p >= 1.0 - tol;
  } else if (alpha < 1.0) {
    g.branch = "[1/2,1)";
    g.valid = q >= 1.0 - tol;
  } else if (alpha == 1.0) {
    g.branch = "1";
    g.valid = q >= p / (d + 1.0 - p * d) - tol;
  } else {
    g.branch = "(1,inf)";
    const double k = std::pow(d + 1.0, 1.0 / alpha);
    g.valid = q >= p / (k - p * (k - 1.0)) - tol;
  }
  if (g.valid) g.variational = unrestricted_reference(PairFamily::Isotropic, d, p, q, alpha);
  return g;
}

std::string to_string(ProgramKind k) {
  switch (k) {
    case ProgramKind::IsoPrimal: return "iso_primal";
    case ProgramKind::WernerPrimal: return "werner_primal";
    case ProgramKind::IsoVarGap: return "iso_var_gap";
    case ProgramKind::IsoBinaryMeasure: return "iso_binary_measure";
  }
  return "unknown";
}

ExtReal solve_scalar_program(const ScalarProgram& sp) {
  require_dimension(sp.d);
  require_probability(sp.p, "p");
  require_probability(sp.q, "q");
  require_alpha(sp.alpha);
  switch (sp.kind) {
    case ProgramKind::IsoPrimal:
      return two_block_program(sp.p, sp.q, sp.alpha, sp.d + 1.0);
    case ProgramKind::WernerPrimal:
      // Bounded block is the antisymmetric one: c_anti <= (d+1)/(d-1) c_sym.
      return two_block_program(1.0 - sp.p, 1.0 - sp.q, sp.alpha, (sp.d + 1.0) / (sp.d - 1.0));
    case ProgramKind::IsoVarGap:
      return iso_var_gap(sp.d, sp.p, sp.q, sp.alpha);
    case ProgramKind::IsoBinaryMeasure:
      return iso_binary_measure(sp.d, sp.p, sp.q, sp.alpha);
  }
  throw DomainError("unknown scalar program kind");
}

}  // namespace mrd
