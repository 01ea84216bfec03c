#include "mrd/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "mrd/closedform.hpp"
#include "mrd/errors.hpp"
#include "mrd/exponents.hpp"
#include "mrd/maxdiv.hpp"
#include "mrd/measured.hpp"
#include "mrd/states.hpp"
#include "mrd/varprog.hpp"

namespace mrd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const std::vector<double> kSandwichOrders = {0.5, 1.0, 2.0, kAlphaInfinity};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::string alpha_str(double a) { return std::isinf(a) ? "inf" : fmt(a); }

// Collects checks for one criterion.
class Ledger {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) failures_.push_back(what);
  }

  // |got - want| <= tol; records the worst deviation.
  void near(double got, double want, double tol, const std::string& what) {
    const double dev = std::abs(got - want);
    worst_ = std::max(worst_, std::isnan(dev) ? kInf : dev);
    check(dev <= tol, what + ": got " + fmt(got) + ", want " + fmt(want) + " +- " + fmt(tol));
  }

  void fail(const std::string& what) { check(false, what); }
  void note(const std::string& text) { notes_ += (notes_.empty() ? "" : ", ") + text; }
  const std::string& notes() const { return notes_; }

  double worst() const { return worst_; }
  int checks() const { return checks_; }
  std::vector<std::string>& failures() { return failures_; }

 private:
  int checks_ = 0;
  double worst_ = 0.0;
  std::vector<std::string> failures_;
  std::string notes_;
};

// Independent classical Renyi divergence in nats, for the property checks.
double classical_oracle(const std::vector<double>& mu, const std::vector<double>& nu, double alpha) {
  if (std::isinf(alpha)) {
    double best = -kInf;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      if (mu[i] <= 0) continue;
      if (nu[i] <= 0) return kInf;
      best = std::max(best, std::log(mu[i] / nu[i]));
    }
    return best;
  }
  if (alpha == 1.0) {
    double s = 0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      if (mu[i] <= 0) continue;
      if (nu[i] <= 0) return kInf;
      s += mu[i] * std::log(mu[i] / nu[i]);
    }
    return s;
  }
  double s = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] <= 0) continue;
    if (nu[i] <= 0) {
      if (alpha > 1) return kInf;
      continue;
    }
    s += std::pow(mu[i], alpha) * std::pow(nu[i], 1 - alpha);
  }
  return std::log(s) / (alpha - 1);
}

std::vector<double> random_distribution(int n, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(static_cast<std::size_t>(n));
  double s = 0;
  for (auto& x : v) s += (x = e(rng) + 1e-3);
  for (auto& x : v) x /= s;
  return v;
}

DensityOp random_two_qubit_state(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = Complex(g(rng), g(rng));
  Matrix rho = m * m.adjoint();
  rho /= rho.trace().real();
  return DensityOp(HermitianOp(Matrix((rho + rho.adjoint()) * 0.5), {2, 2}, {1}));
}

SearchConfig lo_config(int d, std::uint64_t seed) {
  SearchConfig sc;
  sc.restarts = d == 2 ? 8 : d == 3 ? 4 : 2;
  sc.seed = seed;
  return sc;
}

struct Shared {
  // PPT upper bounds at alpha = inf on Phi vs Phi-perp, d = 2, 3, 4.
  std::optional<std::vector<double>> phi_perp_ppt_inf;
};

ConeSpec ppt_cone(double delta = 1e-8) {
  ConeSpec c;
  c.kind = ConeKind::PPT;
  c.delta = delta;
  return c;
}

// Lower and upper bound on one pair; checks both against `want`.
void sandwich(Ledger& l, const DensityOp& rho, const DensityOp& sigma, int d, double alpha, double want,
              const std::string& tag, std::uint64_t seed, double* upper_out = nullptr) {
  const BoundResult lo = optimize_measured(rho, sigma, alpha, MeasurementClass::LO, lo_config(d, seed));
  const VarResult up = variational_bound(rho, sigma, alpha, ppt_cone());
  const std::string where = tag + " d=" + std::to_string(d) + " alpha=" + alpha_str(alpha);
  l.near(lo.value.as_double(), want, 1e-3, where + " LO lower");
  l.near(up.value.as_double(), want, 1e-3, where + " PPT upper");
  l.check(lo.value.as_double() <= up.value.as_double() + 1e-6, where + ": lower exceeds upper");
  if (upper_out) *upper_out = up.value.as_double();
}

void criterion1(Ledger& l, Shared& sh, std::uint64_t seed) {
  std::vector<double> inf_values;
  for (int d = 2; d <= 4; ++d)
    for (double a : kSandwichOrders) {
      double up = 0;
      sandwich(l, max_entangled(d), phi_perp(d), d, a, std::log(d + 1.0), "phi/phi-perp", seed, &up);
      if (std::isinf(a)) inf_values.push_back(up);
    }
  sh.phi_perp_ppt_inf = inf_values;
}

void criterion2(Ledger& l, std::uint64_t seed) {
  for (int d = 2; d <= 3; ++d)
    for (double q : {0.0, 0.1, 1.0 / d, 0.5})
      for (double a : kSandwichOrders)
        sandwich(l, max_entangled(d), isotropic({d, q}), d, a, std::log((d + 1.0) / (q * d + 1.0)),
                 "phi/iso(" + fmt(q) + ")", seed);
}

void criterion3(Ledger& l) {
  const std::vector<double> orders = {0.3, 0.5, 1.0, 2.0, kAlphaInfinity};
  double worst_identity = 0.0;
  for (int d = 2; d <= 3; ++d) {
    std::vector<int> groups;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) groups.push_back(i == j ? 0 : 1);
    const Povm binary = coarse_grain(local_basis_measurement(d), groups);
    for (int i = 0; i <= 10; ++i)
      for (int j = 0; j <= 10; ++j) {
        const double p = i / 10.0, q = j / 10.0;
        for (double a : orders) {
          const std::string where =
              "d=" + std::to_string(d) + " p=" + fmt(p) + " q=" + fmt(q) + " alpha=" + alpha_str(a);
          const ExtReal closed = iso_measured(d, p, q, a);
          const ExtReal program = solve_scalar_program({ProgramKind::IsoBinaryMeasure, d, p, q, a});
          const ExtReal lo = divergence_with_povm(isotropic({d, p}), isotropic({d, q}), binary, a);
          if (closed.infinite || program.infinite || lo.infinite) {
            l.check(closed.infinite && program.infinite && lo.infinite, where + ": infinite in only some forms");
            continue;
          }
          l.near(program.value, closed.value, 1e-6, where + " scalar program");
          const double dev = std::abs(lo.value - closed.value);
          worst_identity = std::max(worst_identity, dev);
          l.check(dev <= 1e-12 * std::max(1.0, std::abs(closed.value)),
                  where + ": LO binary measurement differs by " + fmt(dev));
        }
      }
  }
  l.note("largest LO identity deviation " + fmt(worst_identity));
}

void criterion4(Ledger& l) {
  const auto certify = [&](CertFamily f, int d, int n, double p, double q, const std::string& tag) {
    try {
      const DualCertificate c = explicit_certificate(f, d, n, p, q);
      const auto [rho, sigma] = certificate_states(f, d, n, p, q);
      const CertCheck chk = check_certificate(c, rho, sigma, 1e-9, 1e-10);
      l.check(chk.pass, tag + ": certificate check failed (min eig Y " + fmt(chk.min_eig_y) + ", residual " +
                            fmt(chk.residual) + ")");
      return c.lambda;
    } catch (const Error& e) {
      l.fail(tag + ": " + e.what());
      return 0.0;
    }
  };
  for (int d = 2; d <= 3; ++d)
    for (int n = 1; n <= 3; ++n) {
      const double lam = certify(CertFamily::PhiVsPerp, d, n, 0, 0, "phi_vs_perp d=" + std::to_string(d) +
                                                                        " n=" + std::to_string(n));
      l.near(lam, std::pow(d + 1.0, n), 1e-9 * std::pow(d + 1.0, n), "phi_vs_perp lambda");
    }
  for (int d = 2; d <= 3; ++d) {
    const double t = 1.0 / d;
    const std::vector<std::pair<double, double>> iso = {{0.8 * t, 0.3 * t}, {0.9, 0.5 * t * t / 0.9}, {0.7, 0.7}};
    const std::vector<std::pair<double, double>> wer = {{0.6, 0.9}, {0.3, 0.9}, {0.2, 0.2}};
    for (int n = 1; n <= 2; ++n) {
      for (std::size_t k = 0; k < 3; ++k) {
        const auto [p, q] = iso[k];
        certify(CertFamily::Isotropic, d, n, p, q,
                "iso case " + std::to_string(k + 1) + " d=" + std::to_string(d) + " n=" + std::to_string(n));
        const auto [wp, wq] = wer[k];
        certify(CertFamily::Werner, d, n, wp, wq,
                "werner case " + std::to_string(k + 1) + " d=" + std::to_string(d) + " n=" + std::to_string(n));
      }
    }
  }
  // Numerical dual at d = 2, n <= 2.
  struct DualCase {
    CertFamily f;
    double p, q;
  };
  for (const DualCase& dc : {DualCase{CertFamily::PhiVsPerp, 0, 0}, DualCase{CertFamily::Isotropic, 0.4, 0.15},
                             DualCase{CertFamily::Isotropic, 0.9, 0.1}})
    for (int n = 1; n <= 2; ++n) {
      const std::string tag = "dual " + to_string(dc.f) + " n=" + std::to_string(n);
      try {
        const DualCertificate c = explicit_certificate(dc.f, 2, n, dc.p, dc.q);
        const auto [rho, sigma] = certificate_states(dc.f, 2, n, dc.p, dc.q);
        const BoundResult r = ppt_max_dual(rho, sigma);
        l.near(r.value.value, std::log(c.lambda), 1e-4, tag);
      } catch (const Error& e) {
        l.fail(tag + ": " + e.what());
      }
    }
}

void criterion5(Ledger& l) {
  struct Point {
    double alpha, p, q, delta;
  };
  // One point per branch, each inside its validity region.
  const std::vector<Point> points = {
      {0.25, 1.0, 0.5, 1e-10}, {0.5, 0.5, 1.0, 1e-10}, {1.0, 0.5, 0.3, 1e-8}, {2.0, 0.5, 0.6, 1e-8}};
  const int d = 2;
  for (const Point& pt : points) {
    const std::string where = "alpha=" + alpha_str(pt.alpha) + " p=" + fmt(pt.p) + " q=" + fmt(pt.q);
    const GapValue g = variational_gap_value(d, pt.p, pt.q, pt.alpha);
    if (!g.valid) {
      l.fail(where + ": outside the validity region");
      continue;
    }
    const VarResult v = variational_bound(isotropic({d, pt.p}), isotropic({d, pt.q}), pt.alpha, ppt_cone(pt.delta));
    l.near(v.value.as_double(), g.variational.as_double(), 1e-3, where + " solver V");
    const double solver_gap = v.value.as_double() - g.measured.value;
    l.check(solver_gap >= g.gap() - 1e-3 && solver_gap > 0,
            where + ": solver gap " + fmt(solver_gap) + " vs closed " + fmt(g.gap()));
    if (pt.alpha == 0.25) {
      l.near(v.value.value, std::log(2.0), 1e-3, where + " V = log 2");
      l.near(g.measured.value, std::log(1.5), 1e-12, where + " D = log 1.5");
      l.check(solver_gap >= 0.25, where + ": solver gap " + fmt(solver_gap) + " below 0.25");
    }
  }
}

void criterion6(Ledger& l, std::uint64_t seed) {
  for (int d = 2; d <= 3; ++d) {
    for (double a : kSandwichOrders)
      sandwich(l, antisymmetric_state(d), symmetric_state(d), d, a, std::log((d + 1.0) / (d - 1.0)), "anti/sym",
               seed);
    for (double q : {0.5, 0.9, 1.0}) {
      const double want = std::log((d + 1.0) / (d + 1.0 - 2 * q));
      l.near(werner_measured(d, q, WernerTarget::AntiVsWerner, 2.0).value, want, 1e-12, "werner formula");
      for (double a : {1.0, kAlphaInfinity})
        sandwich(l, antisymmetric_state(d), werner({d, q}), d, a, want, "anti/werner(" + fmt(q) + ")", seed);
    }
    for (CertFamily f : {CertFamily::AntiVsSym, CertFamily::Werner}) {
      const double p = 0.0, q = 1.0;  // w(0) is antisymmetric, w(1) symmetric
      try {
        const DualCertificate c = explicit_certificate(f, d, 2, p, q);
        const auto [rho, sigma] = certificate_states(f, d, 2, p, q);
        l.check(check_certificate(c, rho, sigma).pass, "werner certificate n=2 d=" + std::to_string(d));
        l.near(c.lambda, std::pow((d + 1.0) / (d - 1.0), 2), 1e-9, "werner certificate lambda");
      } catch (const Error& e) {
        l.fail(std::string("werner certificate: ") + e.what());
      }
    }
  }
}

void criterion7(Ledger& l) {
  for (int d = 2; d <= 4; ++d) {
    const double dd = double(d) * d;
    for (double q : {0.0, 0.5 / dd, 1.0 / dd}) {
      const double want = std::log((d + 1.0) / (q * d + 1.0));
      const ExponentResult s = stein_exponent(ExponentPreset::PhiVsIso, d, q);
      l.check(s.valid, "phi/iso Stein valid");
      l.near(s.value, want, 1e-12, "phi/iso Stein d=" + std::to_string(d) + " q=" + fmt(q));
      for (double r : {want, want + 0.25, 3.0}) {
        const ExponentResult sc = strong_converse_exponent(r, ExponentPreset::PhiVsIso, d, q);
        l.near(sc.value, r - want, 1e-12, "phi/iso strong converse r=" + fmt(r));
        l.near(strong_converse_exponent(r, preset_curve(ExponentPreset::PhiVsIso, d, q)).value, r - want, 1e-12,
               "phi/iso strong converse from the constant curve");
      }
    }
    l.check(!stein_exponent(ExponentPreset::PhiVsIso, d, 2.0 / dd).valid, "phi/iso outside region accepted");
    l.check(!strong_converse_exponent(1.0, ExponentPreset::PhiVsIso, d, 2.0 / dd).valid,
            "phi/iso strong converse outside region accepted");
    l.near(stein_exponent(ExponentPreset::PhiVsPerp, d).value, std::log(d + 1.0), 1e-12, "phi/phi-perp Stein");
    const double qw = (d + 1.0) / (d + 2.0);
    for (double q : {qw, 1.0}) {
      const double want = std::log((d + 1.0) / (d + 1.0 - 2 * q));
      l.near(stein_exponent(ExponentPreset::AntiVsWerner, d, q).value, want, 1e-12, "anti/werner Stein");
      l.near(strong_converse_exponent(want + 0.5, ExponentPreset::AntiVsWerner, d, q).value, 0.5, 1e-12,
             "anti/werner strong converse");
    }
    l.check(!stein_exponent(ExponentPreset::AntiVsWerner, d, qw - 0.05).valid, "anti/werner outside region accepted");
  }
}

// Bloch-angle brute force for the best projective product measurement on two
// qubits, then a fine line search around the best cell.
double bloch_grid_oracle(const DensityOp& rho, const DensityOp& sigma, double alpha) {
  const auto basis = [](double theta, double phi) {
    Matrix u(2, 2);
    u(0, 0) = std::cos(theta / 2);
    u(1, 0) = std::exp(Complex(0, phi)) * std::sin(theta / 2);
    u(0, 1) = -std::exp(Complex(0, -phi)) * std::sin(theta / 2);
    u(1, 1) = std::cos(theta / 2);
    return u;
  };
  const auto value = [&](const double* x) {
    const Matrix u = kron(basis(x[0], x[1]), basis(x[2], x[3]));
    std::vector<double> mu(4), nu(4);
    for (int k = 0; k < 4; ++k) {
      mu[std::size_t(k)] = std::max(0.0, (u.col(k).adjoint() * rho.matrix() * u.col(k))(0, 0).real());
      nu[std::size_t(k)] = std::max(0.0, (u.col(k).adjoint() * sigma.matrix() * u.col(k))(0, 0).real());
    }
    return classical_oracle(mu, nu, alpha);
  };
  const double pi = std::acos(-1.0);
  const int coarse = 16;
  double best = -kInf, bx[4] = {0, 0, 0, 0};
  for (int i = 0; i <= coarse; ++i)
    for (int j = 0; j < 2 * coarse; ++j)
      for (int k = 0; k <= coarse; ++k)
        for (int m = 0; m < 2 * coarse; ++m) {
          const double x[4] = {pi * i / coarse, pi * j / coarse, pi * k / coarse, pi * m / coarse};
          const double v = value(x);
          if (v > best) best = v, std::copy(x, x + 4, bx);
        }
  double half = pi / coarse;
  for (int round = 0; round < 12; ++round) {
    for (int c = 0; c < 4; ++c) {
      const double centre = bx[c];
      for (int s = -20; s <= 20; ++s) {
        double x[4] = {bx[0], bx[1], bx[2], bx[3]};
        x[c] = centre + half * s / 20.0;
        const double v = value(x);
        if (v > best) best = v, std::copy(x, x + 4, bx);
      }
    }
    half *= 0.5;
  }
  return best;
}

void criterion8(Ledger& l, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::vector<double> orders = {0.3, 0.5, 0.8, 1.0, 1.5, 2.0, 5.0, kAlphaInfinity};

  // Monotonicity in alpha: classical divergences and the isotropic closed form.
  for (int t = 0; t < 50; ++t) {
    const auto mu = random_distribution(4, rng), nu = random_distribution(4, rng);
    double prev = -kInf;
    for (double a : orders) {
      const double v = renyi(FiniteMeasure(mu), FiniteMeasure(nu), a).as_double();
      l.check(v >= prev - 1e-12, "classical divergence decreases at alpha=" + alpha_str(a));
      prev = v;
    }
  }
  for (int d = 2; d <= 3; ++d)
    for (int i = 0; i <= 10; ++i)
      for (int j = 0; j <= 10; ++j) {
        double prev = -kInf;
        for (double a : orders) {
          const double v = iso_measured(d, i / 10.0, j / 10.0, a).as_double();
          l.check(v >= prev - 1e-12, "isotropic measured value decreases in alpha");
          prev = v;
        }
      }

  // Superadditivity: omega (x) omega is feasible for two copies.
  {
    const DensityOp rho = isotropic({2, 0.7}), sigma = isotropic({2, 0.2});
    const double one = variational_bound(rho, sigma, 2.0, ppt_cone()).value.value;
    const double two = variational_bound(tensor_power(rho, 2), tensor_power(sigma, 2), 2.0, ppt_cone()).value.value;
    l.check(two >= 2 * one - 1e-6, "PPT bound on two isotropic copies below twice one copy: " + fmt(two) + " vs " +
                                       fmt(2 * one));
    const DensityOp r2 = random_two_qubit_state(rng), s2 = random_two_qubit_state(rng);
    const double m1 = ppt_max_primal(r2, s2).value.value;
    const double m2 = ppt_max_primal(tensor_power(r2, 2), tensor_power(s2, 2)).value.value;
    l.check(m2 >= 2 * m1 - 1e-6, "PPT max-divergence on two random copies below twice one copy");
  }

  // Data processing under random stochastic maps, and Pinsker.
  for (int t = 0; t < 50; ++t) {
    const auto mu = random_distribution(5, rng), nu = random_distribution(5, rng);
    std::vector<std::vector<double>> w(5);
    for (auto& col : w) col = random_distribution(3, rng);
    std::vector<double> wm(3, 0.0), wn(3, 0.0);
    for (int x = 0; x < 5; ++x)
      for (int y = 0; y < 3; ++y) {
        wm[std::size_t(y)] += w[std::size_t(x)][std::size_t(y)] * mu[std::size_t(x)];
        wn[std::size_t(y)] += w[std::size_t(x)][std::size_t(y)] * nu[std::size_t(x)];
      }
    for (double a : orders)
      l.check(renyi(FiniteMeasure(wm), FiniteMeasure(wn), a).as_double() <=
                  renyi(FiniteMeasure(mu), FiniteMeasure(nu), a).as_double() + 1e-12,
              "data processing violated at alpha=" + alpha_str(a));
    double tv = 0;
    for (int x = 0; x < 5; ++x) tv += std::abs(mu[std::size_t(x)] - nu[std::size_t(x)]);
    l.check(renyi(FiniteMeasure(mu), FiniteMeasure(nu), 1.0).value >= 0.5 * tv * tv - 1e-12, "Pinsker violated");
  }

  // Scale invariance of eta and midpoint concavity of nu.
  for (int t = 0; t < 20; ++t) {
    const DensityOp rho = random_two_qubit_state(rng), sigma = random_two_qubit_state(rng);
    const HermitianOp w1 = random_two_qubit_state(rng).op(), w2 = random_two_qubit_state(rng).op();
    for (double a : {0.3, 0.7, 1.0, 2.0, kAlphaInfinity}) {
      const double e = objective(rho, sigma, w1, a, Objective::Eta);
      for (double c : {1e-3, 0.5, 7.0, 1e3})
        l.check(std::abs(objective(rho, sigma, c * w1, a, Objective::Eta) - e) <= 1e-9 * std::max(1.0, std::abs(e)),
                "eta not scale invariant at alpha=" + alpha_str(a));
      const double mid = objective(rho, sigma, 0.5 * (w1 + w2), a, Objective::Nu);
      const double avg = 0.5 * (objective(rho, sigma, w1, a, Objective::Nu) + objective(rho, sigma, w2, a, Objective::Nu));
      l.check(mid >= avg - 1e-10, "nu not midpoint concave at alpha=" + alpha_str(a));
    }
  }

  // Weak duality on 100 random pairs.
  for (int t = 0; t < 100; ++t) {
    const DensityOp rho = random_two_qubit_state(rng), sigma = random_two_qubit_state(rng);
    MaxDivConfig cfg;
    const BoundResult primal = ppt_max_primal(rho, sigma, cfg);
    cfg.lambda_lo = std::exp(primal.value.value);
    try {
      const BoundResult dual = ppt_max_dual(rho, sigma, cfg);
      l.check(primal.value.value <= dual.value.value + 1e-9,
              "weak duality violated on pair " + std::to_string(t) + ": " + fmt(primal.value.value) + " > " +
                  fmt(dual.value.value));
    } catch (const Error& e) {
      l.fail("dual failed on pair " + std::to_string(t) + ": " + e.what());
    }
  }

  // PSD cone on commuting pairs equals the classical value.
  for (int t = 0; t < 10; ++t) {
    const auto mu = random_distribution(4, rng), nu = random_distribution(4, rng);
    RealVector dm(4), dn(4);
    for (int i = 0; i < 4; ++i) dm(i) = mu[std::size_t(i)], dn(i) = nu[std::size_t(i)];
    const DensityOp rho(HermitianOp::diagonal(dm, {2, 2}, {1})), sigma(HermitianOp::diagonal(dn, {2, 2}, {1}));
    ConeSpec psd;
    psd.kind = ConeKind::PSD;
    for (double a : {0.3, 0.5, 1.0, 2.0, kAlphaInfinity})
      l.near(variational_bound(rho, sigma, a, psd).value.value, classical_oracle(mu, nu, a), 1e-6,
             "PSD cone on a commuting pair, alpha=" + alpha_str(a));
  }

  // P-LO search against the Bloch-angle grid.
  for (int t = 0; t < 2; ++t) {
    const DensityOp rho = random_two_qubit_state(rng), sigma = random_two_qubit_state(rng);
    for (double a : {0.5, 2.0}) {
      SearchConfig sc;
      sc.seed = seed + t;
      l.near(plo_exact(rho, sigma, a, MeasurementClass::PLO, sc).value.value, bloch_grid_oracle(rho, sigma, a), 1e-3,
             "P-LO vs Bloch grid alpha=" + alpha_str(a));
    }
  }

  // Trade-off bound on every generated test: isotropic-measurement powers and
  // local-basis tests, against additive upper values.
  for (int d = 2; d <= 3; ++d)
    for (int n = 1; n <= 2; ++n) {
      const HermitianOp accept = tensor_power(isotropic_measurement(d).elements()[0], n);
      const Povm test = binary_from_operator(accept);
      for (auto [p, q] : std::vector<std::pair<double, double>>{{1.0, 0.0}, {0.9, 0.2}, {0.6, 0.3}}) {
        const TestReport r = evaluate_test(isotropic({d, p}), isotropic({d, q}), n, test);
        for (double a : {1.5, 2.0, 10.0, kAlphaInfinity}) {
          const double dv = p == 1.0 && q == 0.0 ? n * std::log(d + 1.0)
                                                 : n * unrestricted_reference(PairFamily::Isotropic, d, p, q, a).value;
          l.check(error_tradeoff_bound(r, dv, a), "trade-off bound fails: d=" + std::to_string(d) + " n=" +
                                                      std::to_string(n) + " alpha=" + alpha_str(a));
        }
      }
    }
  for (int t = 0; t < 20; ++t) {
    const DensityOp rho = random_two_qubit_state(rng), sigma = random_two_qubit_state(rng);
    const Povm basis = local_basis_measurement(2);
    std::vector<int> groups(4, 1);
    groups[std::size_t(t % 4)] = 0;
    const TestReport r = evaluate_test(rho, sigma, 1, coarse_grain(basis, groups));
    const double dmax = quantum_max_divergence(rho, sigma).value;
    for (double a : {1.5, 3.0, kAlphaInfinity}) l.check(error_tradeoff_bound(r, dmax, a), "trade-off bound fails");
  }
}

void criterion9(Ledger& l, Shared& sh) {
  if (!sh.phi_perp_ppt_inf) {
    std::vector<double> v;
    for (int d = 2; d <= 4; ++d)
      v.push_back(variational_bound(max_entangled(d), phi_perp(d), kAlphaInfinity, ppt_cone()).value.as_double());
    sh.phi_perp_ppt_inf = v;
  }
  for (int d = 2; d <= 4; ++d) {
    const ExtReal all = quantum_max_divergence(max_entangled(d), phi_perp(d));
    const double ppt = (*sh.phi_perp_ppt_inf)[std::size_t(d - 2)];
    l.check(all.infinite, "unrestricted max-divergence finite at d=" + std::to_string(d));
    l.check(std::isfinite(ppt), "PPT value infinite at d=" + std::to_string(d));
    l.near(ppt, std::log(d + 1.0), 1e-3, "PPT max-divergence d=" + std::to_string(d));
  }
}

const char* title_of(int id) {
  switch (id) {
    case 1: return "Phi vs Phi-perp sandwich, d=2..4";
    case 2: return "Phi vs isotropic sandwich";
    case 3: return "isotropic closed form vs scalar program and LO identity";
    case 4: return "additivity certificates and numerical dual";
    case 5: return "strict variational gap, one point per alpha branch";
    case 6: return "Werner sandwich and certificate";
    case 7: return "Stein and strong-converse presets";
    case 8: return "property suites";
    case 9: return "data hiding: infinite unrestricted, finite PPT";
  }
  return "unknown";
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& cfg) {
  std::vector<CriterionResult> out;
  Shared shared;
  for (int id = 1; id <= 9; ++id) {
    if (!cfg.only.empty() && std::find(cfg.only.begin(), cfg.only.end(), id) == cfg.only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Ledger l;
    try {
      switch (id) {
        case 1: criterion1(l, shared, cfg.seed); break;
        case 2: criterion2(l, cfg.seed); break;
        case 3: criterion3(l); break;
        case 4: criterion4(l); break;
        case 5: criterion5(l); break;
        case 6: criterion6(l, cfg.seed); break;
        case 7: criterion7(l); break;
        case 8: criterion8(l, cfg.seed); break;
        case 9: criterion9(l, shared); break;
      }
    } catch (const std::exception& e) {
      l.fail(std::string("uncaught error: ") + e.what());
    }
    CriterionResult r;
    r.id = id;
    r.title = title_of(id);
    r.checks = l.checks();
    r.failures = std::move(l.failures());
    r.pass = r.failures.empty() && r.checks > 0;
    r.summary = std::to_string(r.checks) + " checks, worst deviation " + fmt(l.worst());
    if (!l.notes().empty()) r.summary += ", " + l.notes();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cfg.on_result) cfg.on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.pass ? "PASS" : "FAIL") << "  " << r.id << "  " << r.title << "  (" << fmt(r.seconds) << " s)  "
     << r.summary;
  const std::size_t shown = std::min<std::size_t>(r.failures.size(), 5);
  for (std::size_t i = 0; i < shown; ++i) os << "\n      " << r.failures[i];
  if (r.failures.size() > shown) os << "\n      ... " << (r.failures.size() - shown) << " more";
  return os.str();
}

}  // namespace mrd
