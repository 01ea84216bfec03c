#include "mrd/maxdiv.hpp"

#include <cmath>
#include <optional>

#include "mrd/states.hpp"

namespace mrd {

namespace {

void require_bipartite(const DensityOp& rho, const DensityOp& sigma) {
  if (!rho.op().has_bipartition() || !sigma.op().has_bipartition())
    throw StructuralError("PPT max-divergence needs a bipartition on both states");
  if (rho.dims() != sigma.dims() || rho.op().b_indices() != sigma.op().b_indices())
    throw StructuralError("rho and sigma have different subsystem layouts");
}

struct Pt {
  std::vector<int> dims, b;
  Matrix operator()(const Matrix& m) const { return partial_transpose_raw(m, dims, b); }
};

struct Feasibility {
  bool feasible = false;
  Matrix x, y;
  int iterations = 0;
};

// Hermitian basis element stored by its (at most two) nonzero entries.
struct SparseEntry {
  int row, col;
  Complex value;
};
using SparseHerm = std::vector<SparseEntry>;

// Orthonormal basis of the Hermitian N x N matrices in the Frobenius product.
std::vector<SparseHerm> hermitian_basis(int n) {
  std::vector<SparseHerm> basis;
  const double r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i) basis.push_back({{i, i, Complex(1.0, 0.0)}});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      basis.push_back({{i, j, Complex(r, 0.0)}, {j, i, Complex(r, 0.0)}});
      basis.push_back({{i, j, Complex(0.0, -r)}, {j, i, Complex(0.0, r)}});
    }
  return basis;
}

// Partial transpose of a sparse element, entry by entry.
SparseHerm transpose_entries(const SparseHerm& b, const Pt& pt, int n) {
  SparseHerm out;
  for (const SparseEntry& e : b) {
    Matrix m = Matrix::Zero(n, n);
    m(e.row, e.col) = 1.0;
    const Matrix t = pt(m);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        if (t(r, c) != Complex(0.0, 0.0)) out.push_back({r, c, e.value});
  }
  return out;
}

// tr[S B] and Re tr[S B S B'] from the sparse entries.
double trace_with(const Matrix& s, const SparseHerm& b) {
  Complex acc = 0.0;
  for (const SparseEntry& e : b) acc += s(e.col, e.row) * e.value;
  return acc.real();
}

double sandwich(const Matrix& s, const SparseHerm& b, const SparseHerm& bp) {
  Complex acc = 0.0;
  for (const SparseEntry& e : b)
    for (const SparseEntry& f : bp) acc += e.value * f.value * s(e.col, f.row) * s(f.col, e.row);
  return acc.real();
}

struct Slack {
  bool ok = false;
  double logdet = 0.0;
  Matrix inverse;
};

Slack slack_of(const Matrix& a) {
  Slack out;
  const Spectrum s = eig_herm(a);
  if (!(s.eigenvalues.minCoeff() > 0.0)) return out;
  out.ok = true;
  out.logdet = s.eigenvalues.array().log().sum();
  out.inverse = from_spectrum(s.eigenvectors, s.eigenvalues.cwiseInverse());
  return out;
}

// Phase-one barrier method for: is there Y >= 0 with target - Y^Gamma >= 0?
// Maximizes t + mu [log det(Y - t) + log det(target - Y^Gamma - t)] along a
// decreasing mu path with damped Newton steps in (Y, t). Stops as soon as
// t > 0 (strictly feasible) or when a centred point proves t* < 0 through
// the barrier gap bound t* <= t + 2 N mu.
Feasibility margin_feasibility(const Matrix& target, const Pt& pt, const std::vector<SparseHerm>& basis,
                               const std::vector<SparseHerm>& basis_pt, int max_newton) {
  const int n = static_cast<int>(target.rows());
  const int m = static_cast<int>(basis.size());
  const Matrix id = Matrix::Identity(n, n);
  const double scale = std::max(target.norm(), 1e-300);

  // Start: Y = tau 1 with tau = lambda_min(target) / 2, t below both margins.
  const double lmin = eig_herm(target).eigenvalues.minCoeff();
  Matrix y = 0.5 * lmin * id;
  double t = 0.5 * lmin - 0.5 * scale;

  Feasibility out;
  auto finish = [&](bool feasible) {
    out.feasible = feasible;
    out.y = y;
    out.x = target - pt(y);
    return out;
  };

  struct Eval {
    bool ok = false;
    double value = 0.0;
    Slack first, second;
  };
  auto evaluate = [&](const Matrix& yy, double tt, double mu) {
    Eval e;
    e.first = slack_of(yy - tt * id);
    if (!e.first.ok) return e;
    e.second = slack_of(target - pt(yy) - tt * id);
    if (!e.second.ok) return e;
    e.ok = true;
    e.value = tt + mu * (e.first.logdet + e.second.logdet);
    return e;
  };

  double mu = scale / n;
  const double mu_floor = 1e-15 * scale;
  int newton = 0;
  Eigen::MatrixXd neg_h(m + 1, m + 1);
  Eigen::VectorXd g(m + 1);
  while (mu >= mu_floor) {
    for (int step = 0; step < 60; ++step) {
      if (++newton > max_newton) return finish(false);
      const Eval e = evaluate(y, t, mu);
      // Coordinates z = (Y in the basis, t). The first slack moves by +B_i,
      // the second by -B_i^Gamma; t moves both by -1.
      const Matrix& s1 = e.first.inverse;
      const Matrix& s2 = e.second.inverse;
      const Matrix s1s1 = s1 * s1, s2s2 = s2 * s2;
      for (int i = 0; i < m; ++i) {
        const auto& bi = basis[static_cast<std::size_t>(i)];
        const auto& ci = basis_pt[static_cast<std::size_t>(i)];
        g(i) = mu * (trace_with(s1, bi) - trace_with(s2, ci));
        for (int k = 0; k <= i; ++k) {
          const auto& bk = basis[static_cast<std::size_t>(k)];
          const auto& ck = basis_pt[static_cast<std::size_t>(k)];
          neg_h(i, k) = neg_h(k, i) = mu * (sandwich(s1, bi, bk) + sandwich(s2, ci, ck));
        }
        neg_h(m, i) = neg_h(i, m) = mu * (-trace_with(s1s1, bi) + trace_with(s2s2, ci));
      }
      g(m) = 1.0 - mu * (s1.trace().real() + s2.trace().real());
      neg_h(m, m) = mu * (s1s1.trace().real() + s2s2.trace().real());

      Eigen::LLT<Eigen::MatrixXd> llt(neg_h);
      if (llt.info() != Eigen::Success) return finish(false);
      const Eigen::VectorXd dir = llt.solve(g);
      const double decrement = g.dot(dir);

      Matrix dy = Matrix::Zero(n, n);
      for (int i = 0; i < m; ++i)
        for (const SparseEntry& en : basis[static_cast<std::size_t>(i)]) dy(en.row, en.col) += dir(i) * en.value;
      double step_len = 1.0;
      bool moved = false;
      while (step_len > 1e-12) {
        const Eval trial = evaluate(y + step_len * dy, t + step_len * dir(m), mu);
        if (trial.ok && trial.value >= e.value + 1e-4 * step_len * decrement) {
          y += step_len * dy;
          t += step_len * dir(m);
          moved = true;
          break;
        }
        step_len *= 0.5;
      }
      out.iterations = newton;
      if (t > 0.0) return finish(true);
      if (!moved || decrement <= 1e-9 * mu) break;
    }
    if (t + 2.02 * n * mu < 0.0) return finish(false);
    mu *= 0.1;
  }
  return finish(false);
}

// --- family certificates --------------------------------------------------

bool close(double a, double b) { return std::abs(a - b) <= 1e-12; }
bool le(double a, double b) { return a <= b + 1e-12; }

std::string iso_case_failure(int d, double p, double q) {
  const double t = 1.0 / d;
  if (le(p, t) && le(q, t) && le(q, p)) return {};
  if (le(t, p) && le(q, t) && le(p * q, t * t)) return {};
  if (le(t, p) && le(t, q) && close(p, q)) return {};
  if (le(p, t) && le(q, t)) return "case 1 (p, q <= 1/d) needs q <= p";
  if (le(t, p) && le(q, t)) return "case 2 (p >= 1/d >= q) needs p q <= 1/d^2";
  if (le(t, p) && le(t, q)) return "case 3 (p, q >= 1/d) needs p = q";
  return "no case covers p < 1/d < q";
}

std::string werner_case_failure(int d, double p, double q) {
  if (le(0.5, p) && le(0.5, q) && le(p, q)) return {};
  if (le(p, 0.5) && le(0.5, q) && le((2 * p - 1) * (2 * q - 1), d * (p + q - 1))) return {};
  if (le(p, 0.5) && le(q, 0.5) && close(p, q)) return {};
  if (le(0.5, p) && le(0.5, q)) return "case 1 (p, q >= 1/2) needs p <= q";
  if (le(p, 0.5) && le(0.5, q)) return "case 2 (p <= 1/2 <= q) needs (2p-1)(2q-1) <= d(p+q-1)";
  if (le(p, 0.5) && le(q, 0.5)) return "case 3 (p, q <= 1/2) needs p = q";
  return "no case covers q < 1/2 < p";
}

void require_params(int d, int n, double p, double q) {
  if (d < 2) throw DomainError("certificate needs d >= 2");
  if (n < 1) throw DomainError("certificate needs n >= 1");
  if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0)) throw DomainError("certificate needs p, q in [0, 1]");
}

}  // namespace

ExtReal quantum_max_divergence(const DensityOp& rho, const DensityOp& sigma) {
  if (rho.dim() != sigma.dim()) throw StructuralError("rho and sigma have different dimensions");
  const Spectrum s = eig_herm(sigma.matrix());
  const double cut = 1e-12 * std::max(1.0, s.eigenvalues.maxCoeff());
  std::vector<int> keep, drop;
  for (int i = 0; i < s.eigenvalues.size(); ++i) (s.eigenvalues(i) > cut ? keep : drop).push_back(i);

  const Matrix& v = s.eigenvectors;
  if (!drop.empty()) {
    Matrix vn(v.rows(), static_cast<Eigen::Index>(drop.size()));
    for (std::size_t k = 0; k < drop.size(); ++k) vn.col(static_cast<Eigen::Index>(k)) = v.col(drop[k]);
    if (max_abs(Matrix(vn.adjoint() * rho.matrix() * vn)) > 1e-10) return ExtReal::inf();
  }
  Matrix vs(v.rows(), static_cast<Eigen::Index>(keep.size()));
  RealVector inv_root(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    vs.col(static_cast<Eigen::Index>(k)) = v.col(keep[k]);
    inv_root(static_cast<Eigen::Index>(k)) = 1.0 / std::sqrt(s.eigenvalues(keep[k]));
  }
  const Matrix w = inv_root.cast<Complex>().asDiagonal() * (vs.adjoint() * rho.matrix() * vs) *
                   inv_root.cast<Complex>().asDiagonal();
  return ExtReal::finite(std::log(eig_herm(Matrix(0.5 * (w + w.adjoint()))).eigenvalues.maxCoeff()));
}

BoundResult ppt_max_primal(const DensityOp& rho, const DensityOp& sigma, const MaxDivConfig& cfg) {
  require_bipartite(rho, sigma);
  ConeSpec cone = cfg.cone;
  cone.kind = ConeKind::PPT;
  const VarResult vr = variational_bound(rho, sigma, kAlphaInfinity, cone, cfg.primal);
  BoundResult r;
  r.value = vr.value;
  r.kind = BoundKind::Lower;
  r.alpha = kAlphaInfinity;
  r.measurement_class = MeasurementClass::PPT;
  r.status = vr.status;
  r.iterations = vr.iterations;
  r.omega = vr.omega;
  return r;
}

BoundResult ppt_max_dual(const DensityOp& rho, const DensityOp& sigma, const MaxDivConfig& cfg) {
  require_bipartite(rho, sigma);
  double lo = cfg.lambda_lo;
  if (!(lo > 0.0)) {
    const BoundResult primal = ppt_max_primal(rho, sigma, cfg);
    lo = std::exp(primal.value.value);
  }
  const Pt pt{rho.dims(), rho.op().b_indices()};
  const Matrix& r = rho.matrix();
  const Matrix& s = sigma.matrix();
  if (rho.dim() > kMaxDualDimension)
    throw ResourceError("PPT dual is limited to total dimension " + std::to_string(kMaxDualDimension));
  const std::vector<SparseHerm> basis = hermitian_basis(rho.dim());
  std::vector<SparseHerm> basis_pt;
  for (const SparseHerm& b : basis) basis_pt.push_back(transpose_entries(b, pt, rho.dim()));
  int total_iter = 0;

  auto probe = [&](double lambda) {
    Feasibility f = margin_feasibility(lambda * s - r, pt, basis, basis_pt, cfg.newton_max_iter);
    total_iter += f.iterations;
    return f;
  };

  // Bracket: doubling from the primal value until a probe is feasible.
  double hi = lo;
  Feasibility best;
  for (;;) {
    hi *= 2.0;
    if (hi > lo * cfg.bracket_cap) throw SolverError("dual-bracket-failed", hi);
    best = probe(hi);
    if (best.feasible) break;
  }

  while ((hi - lo) / hi > cfg.rel_width) {
    const double mid = std::sqrt(lo * hi);
    Feasibility f = probe(mid);
    if (f.feasible) {
      hi = mid;
      best = std::move(f);
    } else {
      lo = mid;
    }
  }

  const std::vector<int>& dims = rho.dims();
  const std::vector<int>& b = rho.op().b_indices();
  DualCertificate cert;
  cert.lambda = hi;
  cert.x = HermitianOp(best.x, dims, b);
  cert.y = HermitianOp(best.y, dims, b);
  cert.residual = max_abs(Matrix(hi * s - r - best.x - pt(best.y)));

  BoundResult out;
  out.value = ExtReal::finite(std::log(hi));
  out.kind = BoundKind::Upper;
  out.alpha = kAlphaInfinity;
  out.measurement_class = MeasurementClass::PPT;
  out.status = SolverStatus::Converged;
  out.iterations = total_iter;
  out.certificate = std::move(cert);
  out.note = "lower endpoint infeasible by the barrier gap bound or by budget";
  return out;
}

std::string to_string(CertFamily f) {
  switch (f) {
    case CertFamily::PhiVsPerp: return "phi_vs_perp";
    case CertFamily::AntiVsSym: return "anti_vs_sym";
    case CertFamily::Isotropic: return "iso";
    case CertFamily::Werner: return "werner";
  }
  return "iso";
}

CertFamily cert_family_from_string(const std::string& s) {
  if (s == "phi_vs_perp" || s == "phi-vs-perp") return CertFamily::PhiVsPerp;
  if (s == "anti_vs_sym" || s == "anti-vs-sym") return CertFamily::AntiVsSym;
  if (s == "iso" || s == "isotropic") return CertFamily::Isotropic;
  if (s == "werner") return CertFamily::Werner;
  throw DomainError("unknown certificate family '" + s + "'");
}

CertCheck check_certificate(const DualCertificate& c, const DensityOp& rho, const DensityOp& sigma, double tol,
                            double eig_tol) {
  if (c.x.dim() != rho.dim() || c.y.dim() != rho.dim() || sigma.dim() != rho.dim())
    throw StructuralError("certificate and states have different dimensions");
  CertCheck out;
  out.min_eig_x = lambda_min(c.x);
  out.min_eig_y = lambda_min(c.y);
  const Matrix pty = partial_transpose_raw(c.y.matrix(), rho.dims(), rho.op().b_indices());
  out.residual = max_abs(Matrix(c.lambda * sigma.matrix() - rho.matrix() - c.x.matrix() - pty));
  out.pass = out.min_eig_x >= -eig_tol && out.min_eig_y >= -eig_tol && out.residual <= tol;
  return out;
}

std::pair<DensityOp, DensityOp> certificate_states(CertFamily f, int d, int n, double p, double q) {
  DensityOp rho, sigma;
  switch (f) {
    case CertFamily::PhiVsPerp: rho = max_entangled(d); sigma = phi_perp(d); break;
    case CertFamily::AntiVsSym: rho = antisymmetric_state(d); sigma = symmetric_state(d); break;
    case CertFamily::Isotropic: rho = isotropic({d, p}); sigma = isotropic({d, q}); break;
    case CertFamily::Werner: rho = werner({d, p}); sigma = werner({d, q}); break;
  }
  return {tensor_power(rho, n), tensor_power(sigma, n)};
}

DualCertificate explicit_certificate(CertFamily f, int d, int n, double p, double q) {
  require_params(d, n, p, q);
  const HermitianOp id = HermitianOp::identity({d, d}, {1});
  const HermitianOp swap = swap_operator(d);
  const HermitianOp dphi = max_entangled_projector(d);
  const double dd = d;

  DualCertificate c;
  switch (f) {
    case CertFamily::PhiVsPerp: {
      c.lambda = std::pow(dd + 1, n);
      const HermitianOp plus = tensor_power(id - (1.0 / dd) * swap, n);
      const HermitianOp minus = tensor_power((1.0 / dd) * swap, n);
      c.y = std::pow(dd - 1, -n) * (plus - std::pow(dd - 1, n) * minus);
      break;
    }
    case CertFamily::AntiVsSym: {
      c.lambda = std::pow((dd + 1) / (dd - 1), n);
      c.y = std::pow(dd * (dd - 1), -n) * (tensor_power(id + dphi, n) - tensor_power(id - dphi, n));
      break;
    }
    case CertFamily::Isotropic: {
      if (const std::string why = iso_case_failure(d, p, q); !why.empty())
        throw DomainError("iso certificate: " + why);
      c.lambda = std::pow((p * dd + 1) / (q * dd + 1), n);
      // i(x)^Gamma = ((1-x) d 1 + (d^2 x - 1) F) / (d (d^2 - 1)).
      auto pt_state = [&](double x) {
        return (1.0 / (dd * (dd * dd - 1))) * ((1 - x) * dd * id + (dd * dd * x - 1) * swap);
      };
      c.y = c.lambda * tensor_power(pt_state(q), n) - tensor_power(pt_state(p), n);
      break;
    }
    case CertFamily::Werner: {
      if (const std::string why = werner_case_failure(d, p, q); !why.empty())
        throw DomainError("werner certificate: " + why);
      c.lambda = std::pow((dd + 1 - 2 * p) / (dd + 1 - 2 * q), n);
      // w(x)^Gamma = ((d + 1 - 2x) 1 + (2xd - d - 1) d Phi) / (d (d^2 - 1)).
      auto pt_state = [&](double x) {
        return (1.0 / (dd * (dd * dd - 1))) * ((dd + 1 - 2 * x) * id + (2 * x * dd - dd - 1) * dphi);
      };
      c.y = c.lambda * tensor_power(pt_state(q), n) - tensor_power(pt_state(p), n);
      break;
    }
  }
  c.x = HermitianOp::zero(c.y.dims(), c.y.b_indices());
  c.family = to_string(f);
  c.d = d;
  c.n = n;

  const auto [rho, sigma] = certificate_states(f, d, n, p, q);
  const CertCheck chk = check_certificate(c, rho, sigma);
  c.residual = chk.residual;
  if (!chk.pass)
    throw ValidationError("certificate check failed: min eig Y = " + std::to_string(chk.min_eig_y) +
                          ", residual = " + std::to_string(chk.residual));
  return c;
}

}  // namespace mrd
