#include "mrd/varprog.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "local_search.hpp"

namespace mrd {

namespace {

enum class Branch { Small, Middle, One, Infinity };

Branch branch_of(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("Renyi order must be positive");
  if (std::isinf(alpha)) return Branch::Infinity;
  if (alpha == 1.0) return Branch::One;
  if (alpha < 0.5) return Branch::Small;
  return Branch::Middle;
}

struct Eig {
  RealVector lam;
  Matrix q;
};

Eig eig_of(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) throw SolverError("eigensolver failed inside the variational solver", max_abs(m));
  return {es.eigenvalues(), es.eigenvectors()};
}

// f(x) = x^s (power) or log x, with divided differences for the
// Daleckii-Krein derivative.
struct ScalarFn {
  bool log = false;
  double s = 1.0;

  double value(double x) const { return log ? std::log(x) : std::pow(x, s); }

  double divided(double a, double b) const {
    const double x = std::log(a / b);
    if (std::abs(x) < 1e-12) {
      const double m = 0.5 * (a + b);
      return log ? 1.0 / m : s * std::pow(m, s - 1.0);
    }
    if (log) return x / (b * std::expm1(x));
    return std::pow(b, s - 1.0) * std::expm1(s * x) / std::expm1(x);
  }

  double second(double x) const { return log ? -1.0 / (x * x) : s * (s - 1.0) * std::pow(x, s - 2.0); }

  // Second divided difference f[a, b, c].
  double divided2(double a, double b, double c) const {
    double v[3] = {a, b, c};
    std::sort(v, v + 3);
    if (v[2] - v[0] <= 1e-6 * v[2]) return 0.5 * second(0.5 * (v[0] + v[2]));
    return (divided(v[1], v[2]) - divided(v[0], v[1])) / (v[2] - v[0]);
  }
};

// tr[A f(omega)] in the eigenbasis; `at` is Q^dag A Q.
double trace_fn(const Matrix& at, const RealVector& lam, const ScalarFn& f) {
  double t = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) t += at(i, i).real() * f.value(lam(i));
  return t;
}

// Gradient of omega -> tr[A f(omega)], returned in the eigenbasis.
Matrix grad_fn(const Matrix& at, const RealVector& lam, const ScalarFn& f) {
  const Eigen::Index n = lam.size();
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = at(i, j) * f.divided(lam(i), lam(j));
  return g;
}

struct Eval {
  double value = 0.0;
  Matrix grad;  // in the standard basis
};

// Scale-invariant objective with optional gradient.
Eval eta_eval(const Matrix& rho, const Matrix& sigma, const Matrix& omega, double alpha, bool with_grad) {
  const Eig e = eig_of(omega);
  if (e.lam(0) <= 0.0) {
    std::ostringstream os;
    os << "omega must be positive definite (smallest eigenvalue " << e.lam(0) << ")";
    throw DomainError(os.str());
  }
  const Matrix rt = e.q.adjoint() * rho * e.q;
  const Matrix st = e.q.adjoint() * sigma * e.q;
  const ScalarFn lin{false, 1.0};
  Eval out;
  Matrix g;
  auto add = [&](double coeff, const Matrix& at, const ScalarFn& f, bool take_log) {
    const double t = trace_fn(at, e.lam, f);
    if (take_log) {
      out.value += coeff * std::log(t);
      if (with_grad) g += (coeff / t) * grad_fn(at, e.lam, f);
    } else {
      out.value += coeff * t;
      if (with_grad) g += coeff * grad_fn(at, e.lam, f);
    }
  };
  if (with_grad) g = Matrix::Zero(omega.rows(), omega.cols());
  switch (branch_of(alpha)) {
    case Branch::Small: {
      const double beta = alpha / (alpha - 1.0);
      add(alpha / (alpha - 1.0), rt, lin, true);
      add(-1.0, st, ScalarFn{false, beta}, true);
      break;
    }
    case Branch::Middle: {
      const double gamma = (alpha - 1.0) / alpha;
      add(alpha / (alpha - 1.0), rt, ScalarFn{false, gamma}, true);
      add(-1.0, st, lin, true);
      break;
    }
    case Branch::One:
      add(1.0, rt, ScalarFn{true, 0.0}, false);
      add(-1.0, st, lin, true);
      break;
    case Branch::Infinity:
      add(1.0, rt, lin, true);
      add(-1.0, st, lin, true);
      break;
  }
  if (with_grad) {
    out.grad = e.q * g * e.q.adjoint();
    out.grad = (out.grad + out.grad.adjoint()) * 0.5;
  }
  return out;
}

double nu_value(const Matrix& rho, const Matrix& sigma, const Matrix& omega, double alpha) {
  const Eig e = eig_of(omega);
  if (e.lam(0) <= 0.0) throw DomainError("omega must be positive definite");
  const Matrix rt = e.q.adjoint() * rho * e.q;
  const Matrix st = e.q.adjoint() * sigma * e.q;
  const ScalarFn lin{false, 1.0};
  switch (branch_of(alpha)) {
    case Branch::Small: {
      const double beta = alpha / (alpha - 1.0);
      const double inside = alpha * trace_fn(rt, e.lam, lin) + (1 - alpha) * trace_fn(st, e.lam, {false, beta});
      return std::log(inside) / (alpha - 1.0);
    }
    case Branch::Middle: {
      const double gamma = (alpha - 1.0) / alpha;
      const double inside = alpha * trace_fn(rt, e.lam, {false, gamma}) + (1 - alpha) * trace_fn(st, e.lam, lin);
      if (inside <= 0.0) return -std::numeric_limits<double>::infinity();
      return std::log(inside) / (alpha - 1.0);
    }
    case Branch::One: return trace_fn(rt, e.lam, {true, 0.0}) + 1.0 - trace_fn(st, e.lam, lin);
    case Branch::Infinity: return std::log(trace_fn(rt, e.lam, lin)) + 1.0 - trace_fn(st, e.lam, lin);
  }
  return 0.0;
}

double min_eig(const Matrix& m) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

struct AscentResult {
  Matrix omega;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct TraceTerm {
  double coeff;
  bool take_log;
  ScalarFn f;
  const Matrix* state;
};

std::vector<TraceTerm> eta_terms(const Matrix& rho, const Matrix& sigma, double alpha) {
  const ScalarFn lin{false, 1.0};
  switch (branch_of(alpha)) {
    case Branch::Small:
      return {{alpha / (alpha - 1.0), true, lin, &rho}, {-1.0, true, {false, alpha / (alpha - 1.0)}, &sigma}};
    case Branch::Middle:
      return {{alpha / (alpha - 1.0), true, {false, (alpha - 1.0) / alpha}, &rho}, {-1.0, true, lin, &sigma}};
    case Branch::One: return {{1.0, false, {true, 0.0}, &rho}, {-1.0, true, lin, &sigma}};
    case Branch::Infinity: return {{1.0, true, lin, &rho}, {-1.0, true, lin, &sigma}};
  }
  return {};
}

// eta with its gradient and Hessian-vector products at a fixed omega. The
// second derivative uses the second-order Daleckii-Krein formula.
class EtaModel {
 public:
  EtaModel(const Matrix& rho, const Matrix& sigma, const Matrix& omega, double alpha) : e_(eig_of(omega)) {
    if (e_.lam(0) <= 0.0) throw DomainError("omega must be positive definite");
    const Eigen::Index n = e_.lam.size();
    Matrix g = Matrix::Zero(n, n);
    for (const TraceTerm& t : eta_terms(rho, sigma, alpha)) {
      Part part{t, e_.q.adjoint() * *t.state * e_.q, 0.0, {}, {}};
      part.trace = trace_fn(part.at, e_.lam, t.f);
      part.grad = grad_fn(part.at, e_.lam, t.f);
      value_ += t.coeff * (t.take_log ? std::log(part.trace) : part.trace);
      g += (t.take_log ? t.coeff / part.trace : t.coeff) * part.grad;
      if (t.f.log || t.f.s != 1.0) {
        part.second.resize(static_cast<std::size_t>(n * n * n));
        for (Eigen::Index a = 0; a < n; ++a)
          for (Eigen::Index b = 0; b < n; ++b)
            for (Eigen::Index k = 0; k < n; ++k)
              part.second[static_cast<std::size_t>((a * n + b) * n + k)] = t.f.divided2(e_.lam(a), e_.lam(b), e_.lam(k));
      }
      parts_.push_back(std::move(part));
    }
    grad_ = e_.q * g * e_.q.adjoint();
    grad_ = (grad_ + grad_.adjoint()) * 0.5;
  }

  double value() const { return value_; }
  const Matrix& grad() const { return grad_; }

  Matrix hess_vec(const Matrix& c) const {
    const Eigen::Index n = e_.lam.size();
    const Matrix ct = e_.q.adjoint() * c * e_.q;
    Matrix out = Matrix::Zero(n, n);
    for (const Part& p : parts_) {
      Matrix l = Matrix::Zero(n, n);
      if (!p.second.empty()) {
        for (Eigen::Index b = 0; b < n; ++b)
          for (Eigen::Index a = 0; a < n; ++a) {
            Complex acc = 0.0;
            for (Eigen::Index k = 0; k < n; ++k)
              acc += p.second[static_cast<std::size_t>((a * n + b) * n + k)] *
                     (ct(b, k) * p.at(k, a) + p.at(b, k) * ct(k, a));
            l(b, a) = acc;
          }
      }
      if (p.term.take_log) {
        const double dir = inner(p.grad, ct);
        out += p.term.coeff * (l / p.trace - p.grad * (dir / (p.trace * p.trace)));
      } else {
        out += p.term.coeff * l;
      }
    }
    Matrix h = e_.q * out * e_.q.adjoint();
    return (h + h.adjoint()) * 0.5;
  }

 private:
  struct Part {
    TraceTerm term;
    Matrix at;
    double trace;
    Matrix grad;                 // eigenbasis
    std::vector<double> second;  // f[l_a, l_b, l_k]
  };
  Eig e_;
  std::vector<Part> parts_;
  double value_ = 0.0;
  Matrix grad_;
};

struct ConeLayout {
  std::vector<int> dims;
  std::vector<int> b;
  bool ppt = false;
  double delta = 1e-8;

  Matrix pt(const Matrix& m) const { return partial_transpose_raw(m, dims, b); }
};

// mu * (log det(omega - delta) + log det(omega^Gamma)).
class BarrierModel {
 public:
  BarrierModel(const Matrix& omega, const ConeLayout& lay, double mu) : lay_(lay), mu_(mu) {
    const Eigen::Index n = omega.rows();
    add(omega - lay.delta * Matrix::Identity(n, n), floor_inv_);
    if (lay.ppt && feasible_) add(lay.pt(omega), pt_inv_);
    if (!feasible_) return;
    grad_ = mu * floor_inv_;
    if (lay.ppt) grad_ += mu * lay.pt(pt_inv_);
  }

  bool feasible() const { return feasible_; }
  double value() const { return value_; }
  const Matrix& grad() const { return grad_; }

  Matrix hess_vec(const Matrix& c) const {
    Matrix h = -mu_ * floor_inv_ * c * floor_inv_;
    if (lay_.ppt) h -= mu_ * lay_.pt(Matrix(pt_inv_ * lay_.pt(c) * pt_inv_));
    return (h + h.adjoint()) * 0.5;
  }

 private:
  void add(const Matrix& m, Matrix& inv) {
    const Eig e = eig_of(m);
    if (e.lam(0) <= 0.0) {
      feasible_ = false;
      return;
    }
    value_ += mu_ * e.lam.array().log().sum();
    inv = e.q * e.lam.cwiseInverse().cast<Complex>().asDiagonal() * e.q.adjoint();
  }

  const ConeLayout& lay_;
  double mu_;
  bool feasible_ = true;
  double value_ = 0.0;
  Matrix floor_inv_, pt_inv_, grad_;
};

// Orthonormal coordinates on the traceless Hermitian matrices: n - 1
// diagonal directions, then real and imaginary off-diagonal pairs.
class TracelessChart {
 public:
  explicit TracelessChart(int n) : n_(n), diag_(Eigen::MatrixXd::Zero(n, std::max(0, n - 1))) {
    for (int k = 1; k < n; ++k) {
      const double norm = std::sqrt(static_cast<double>(k) * (k + 1));
      for (int i = 0; i < k; ++i) diag_(i, k - 1) = 1.0 / norm;
      diag_(k, k - 1) = -k / norm;
    }
  }

  int size() const { return n_ * n_ - 1; }

  Matrix direction(const Eigen::VectorXd& x) const {
    Matrix m = Matrix::Zero(n_, n_);
    const Eigen::VectorXd d = diag_ * x.head(n_ - 1);
    for (int i = 0; i < n_; ++i) m(i, i) = d(i);
    int k = n_ - 1;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j, k += 2) {
        const Complex z = Complex(x(k), -x(k + 1)) / std::sqrt(2.0);
        m(i, j) = z;
        m(j, i) = std::conj(z);
      }
    return m;
  }

  Eigen::VectorXd coords(const Matrix& g) const {
    Eigen::VectorXd x(size());
    x.head(n_ - 1) = diag_.transpose() * g.diagonal().real();
    int k = n_ - 1;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j, k += 2) {
        x(k) = std::sqrt(2.0) * g(i, j).real();
        x(k + 1) = -std::sqrt(2.0) * g(i, j).imag();
      }
    return x;
  }

 private:
  int n_;
  Eigen::MatrixXd diag_;
};

double barrier_objective(const Matrix& rho, const Matrix& sigma, double alpha, const ConeLayout& lay,
                         const Matrix& omega, double mu) {
  const BarrierModel b(omega, lay, mu);
  if (!b.feasible()) return -std::numeric_limits<double>::infinity();
  return eta_eval(rho, sigma, omega, alpha, false).value + b.value();
}

// Log-det barrier path with damped Newton steps on the slice tr omega = n.
// mu decreases tenfold per stage from mu_start down to 1e-13.
AscentResult barrier_ascent(const Matrix& rho, const Matrix& sigma, double alpha, const ConeLayout& lay,
                            Matrix omega, double mu_start, int max_iter) {
  constexpr double kMuEnd = 1e-13;
  constexpr double kArmijo = 1e-4;
  const int n = static_cast<int>(omega.rows());
  const TracelessChart chart(n);
  const int m = chart.size();
  AscentResult out;
  out.converged = true;
  for (double mu = mu_start;; mu *= 0.1) {
    for (;;) {
      if (out.iterations >= max_iter) {
        out.converged = false;
        break;
      }
      ++out.iterations;
      const EtaModel em(rho, sigma, omega, alpha);
      const BarrierModel bm(omega, lay, mu);
      const double phi = em.value() + bm.value();
      const Eigen::VectorXd g = chart.coords(em.grad() + bm.grad());
      Eigen::MatrixXd h(m, m);
      Eigen::VectorXd unit = Eigen::VectorXd::Zero(m);
      for (int k = 0; k < m; ++k) {
        unit(k) = 1.0;
        const Matrix c = chart.direction(unit);
        h.col(k) = chart.coords(em.hess_vec(c) + bm.hess_vec(c));
        unit(k) = 0.0;
      }
      const Eigen::MatrixXd neg = -0.5 * (h + h.transpose());
      const double scale = std::max(1e-300, neg.diagonal().cwiseAbs().maxCoeff());
      Eigen::LLT<Eigen::MatrixXd> llt;
      for (double tau = 0.0;; tau = tau == 0.0 ? 1e-12 * scale : tau * 10.0) {
        llt.compute(neg + tau * Eigen::MatrixXd::Identity(m, m));
        if (llt.info() == Eigen::Success) break;
      }
      const Eigen::VectorXd p = llt.solve(g);
      const double dec = g.dot(p);
      if (!(dec > 1e-13)) break;
      const Matrix dir = chart.direction(p);
      bool moved = false;
      for (double t = 1.0; t > 1e-14; t *= 0.5) {
        const Matrix trial = omega + t * dir;
        if (barrier_objective(rho, sigma, alpha, lay, trial, mu) >= phi + kArmijo * t * dec) {
          omega = (trial + trial.adjoint()) * 0.5;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    if (!out.converged || mu <= kMuEnd) break;
  }
  out.omega = omega;
  out.value = eta_eval(rho, sigma, omega, alpha, false).value;
  return out;
}

// Strictly feasible starting point: identity mixed with a random positive
// matrix, pulled towards the identity until the partial transpose is positive.
Matrix random_start(const ConeLayout& lay, int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(nd(rng), nd(rng));
  Matrix r = g * g.adjoint();
  r *= dim / r.trace().real();
  const Matrix one = Matrix::Identity(dim, dim);
  for (double t = 0.9;; t *= 0.5) {
    const Matrix w = (1.0 - t) * one + t * r;
    if (min_eig(w) > 2 * lay.delta && (!lay.ppt || min_eig(lay.pt(w)) > 0.0)) return w;
  }
}

// Inner approximation of the separable cone by sum_k g_k g_k^dag (x) h_k h_k^dag.
AscentResult sep_inner_ascent(const Matrix& rho, const Matrix& sigma, double alpha, int da, int db, int terms,
                              double delta, int max_iter, double tol, std::uint64_t seed, bool random_start) {
  const int dim = da * db;
  std::vector<Eigen::VectorXcd> g(static_cast<std::size_t>(terms)), h(static_cast<std::size_t>(terms));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int k = 0; k < terms; ++k) {
    auto& gk = g[static_cast<std::size_t>(k)];
    auto& hk = h[static_cast<std::size_t>(k)];
    gk = Eigen::VectorXcd::Zero(da);
    hk = Eigen::VectorXcd::Zero(db);
    if (random_start) {
      for (int i = 0; i < da; ++i) gk(i) = Complex(nd(rng), nd(rng));
      for (int i = 0; i < db; ++i) hk(i) = Complex(nd(rng), nd(rng));
    } else {
      // Product basis vectors reproduce the identity.
      gk((k / db) % da) = 1.0;
      hk(k % db) = 1.0;
    }
  }
  auto assemble = [&](const std::vector<Eigen::VectorXcd>& gs, const std::vector<Eigen::VectorXcd>& hs) {
    Matrix s = Matrix::Zero(dim, dim);
    for (int k = 0; k < terms; ++k) {
      const Eigen::VectorXcd v = kron(gs[static_cast<std::size_t>(k)], hs[static_cast<std::size_t>(k)]);
      s += v * v.adjoint();
    }
    const double tr = s.trace().real();
    const double c = tr > 0 ? dim / tr : 1.0;
    return Matrix(c * s + delta * Matrix::Identity(dim, dim));
  };

  Matrix omega = assemble(g, h);
  Eval cur = eta_eval(rho, sigma, omega, alpha, true);
  double step = 1.0 / std::max(1e-300, cur.grad.norm());
  AscentResult out{omega, cur.value, 0, false};
  int quiet = 0;
  for (int it = 1; it <= max_iter; ++it) {
    out.iterations = it;
    std::vector<Eigen::VectorXcd> dg(g.size()), dh(h.size());
    for (int k = 0; k < terms; ++k) {
      const auto& gk = g[static_cast<std::size_t>(k)];
      const auto& hk = h[static_cast<std::size_t>(k)];
      const Matrix b = kron(Matrix::Identity(da, da), Matrix(hk));
      const Matrix c = kron(Matrix(gk), Matrix::Identity(db, db));
      dg[static_cast<std::size_t>(k)] = 2.0 * (b.adjoint() * cur.grad * b) * gk;
      dh[static_cast<std::size_t>(k)] = 2.0 * (c.adjoint() * cur.grad * c) * hk;
    }
    step *= 2.0;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      std::vector<Eigen::VectorXcd> g2 = g, h2 = h;
      for (std::size_t k = 0; k < g.size(); ++k) {
        g2[k] += step * dg[k];
        h2[k] += step * dh[k];
      }
      const Matrix trial = assemble(g2, h2);
      const Eval next = eta_eval(rho, sigma, trial, alpha, true);
      if (next.value > cur.value) {
        const double gain = next.value - cur.value;
        g = std::move(g2);
        h = std::move(h2);
        omega = trial;
        cur = next;
        accepted = true;
        quiet = gain <= tol * std::max(1.0, std::abs(cur.value)) ? quiet + 1 : 0;
        break;
      }
      step *= 0.5;
    }
    if (!accepted || quiet >= 3) {
      out.converged = true;
      break;
    }
  }
  out.omega = omega;
  out.value = cur.value;
  return out;
}

void require_pair(const DensityOp& rho, const DensityOp& sigma) {
  if (rho.dims() != sigma.dims()) throw StructuralError("states act on different spaces");
}

}  // namespace

std::string to_string(ConeKind k) {
  switch (k) {
    case ConeKind::PSD: return "PSD";
    case ConeKind::PPT: return "PPT";
    case ConeKind::SEPInner: return "SEP_inner";
  }
  return "PPT";
}

SolverConfig solver_config_from_json(const nlohmann::json& j, ConeSpec& cone) {
  SolverConfig cfg;
  try {
    if (j.contains("delta")) cone.delta = j.at("delta").get<double>();
    if (j.contains("max_iter")) cfg.max_iter = j.at("max_iter").get<int>();
    if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
    if (j.contains("restarts")) cfg.restarts = j.at("restarts").get<int>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("malformed solver config: ") + e.what());
  }
  return cfg;
}

nlohmann::json solver_config_to_json(const SolverConfig& cfg, const ConeSpec& cone) {
  return {{"delta", cone.delta}, {"max_iter", cfg.max_iter}, {"tol", cfg.tol}, {"restarts", cfg.restarts},
          {"seed", cfg.seed}};
}

double objective(const DensityOp& rho, const DensityOp& sigma, const HermitianOp& omega, double alpha,
                 Objective form) {
  require_pair(rho, sigma);
  if (omega.dim() != rho.dim()) throw StructuralError("omega acts on a different space");
  if (form == Objective::Eta) return eta_eval(rho.matrix(), sigma.matrix(), omega.matrix(), alpha, false).value;
  return nu_value(rho.matrix(), sigma.matrix(), omega.matrix(), alpha);
}

double optimal_scale(const DensityOp& rho, const DensityOp& sigma, const HermitianOp& omega, double alpha) {
  const Eig e = eig_of(omega.matrix());
  if (e.lam(0) <= 0.0) throw DomainError("omega must be positive definite");
  const Matrix rt = e.q.adjoint() * rho.matrix() * e.q;
  const Matrix st = e.q.adjoint() * sigma.matrix() * e.q;
  const ScalarFn lin{false, 1.0};
  switch (branch_of(alpha)) {
    case Branch::Small: {
      const double beta = alpha / (alpha - 1.0);
      return std::pow(trace_fn(rt, e.lam, lin), alpha - 1.0) * std::pow(trace_fn(st, e.lam, {false, beta}), 1.0 - alpha);
    }
    case Branch::Middle: {
      const double gamma = (alpha - 1.0) / alpha;
      return std::pow(trace_fn(rt, e.lam, {false, gamma}), alpha) * std::pow(trace_fn(st, e.lam, lin), -alpha);
    }
    case Branch::One:
    case Branch::Infinity: return 1.0 / trace_fn(st, e.lam, lin);
  }
  return 1.0;
}

VarResult variational_bound(const DensityOp& rho, const DensityOp& sigma, double alpha, const ConeSpec& cone,
                            const SolverConfig& cfg) {
  require_pair(rho, sigma);
  branch_of(alpha);
  if (!(cone.delta >= 1e-10 && cone.delta <= 1e-4)) throw DomainError("cone floor delta must lie in [1e-10, 1e-4]");
  const HermitianOp& r = rho.op();
  if (cone.kind != ConeKind::PSD && !r.has_bipartition())
    throw StructuralError("PPT and separable cones need a declared bipartition");
  const int dim = r.dim();
  const Matrix& rm = rho.matrix();
  const Matrix& sm = sigma.matrix();

  VarResult out;
  out.objective = Objective::Eta;
  out.kind = cone.kind == ConeKind::PSD ? BoundKind::Exact
             : cone.kind == ConeKind::PPT ? BoundKind::Upper
                                          : BoundKind::Heuristic;

  AscentResult best;
  best.value = -std::numeric_limits<double>::infinity();
  int iterations = 0;

  if (cone.kind == ConeKind::SEPInner) {
    const int terms = cone.sep_terms > 0 ? cone.sep_terms : r.dim_a() * r.dim_b();
    const detail::AbPair pair = detail::to_ab_order(rho, sigma);
    for (int k = 0; k < std::max(1, cfg.restarts); ++k) {
      AscentResult a = sep_inner_ascent(pair.rho, pair.sigma, alpha, pair.da, pair.db, terms, cone.delta,
                                        cfg.max_iter, cfg.tol, cfg.seed + static_cast<std::uint64_t>(k), k > 0);
      iterations += a.iterations;
      if (a.value > best.value) best = std::move(a);
    }
    // Back to the caller's subsystem order.
    std::vector<int> inverse(pair.order.size());
    for (std::size_t k = 0; k < pair.order.size(); ++k) inverse[static_cast<std::size_t>(pair.order[k])] = static_cast<int>(k);
    out.omega = permute_subsystems(HermitianOp(best.omega, pair.dims, pair.b_indices), inverse);
    out.value = ExtReal::finite(best.value);
    out.value_tenth_delta = best.value;
    out.status = best.converged ? SolverStatus::Converged : SolverStatus::Budget;
    out.iterations = iterations;
    out.nu_at_scale = nu_value(rm, sm, out.omega.matrix() * optimal_scale(rho, sigma, out.omega, alpha), alpha);
    return out;
  }

  const ConeLayout lay{r.dims(), r.b_indices(), cone.kind == ConeKind::PPT, cone.delta};
  for (int k = 0; k < std::max(1, cfg.restarts); ++k) {
    const Matrix start =
        k == 0 ? Matrix(Matrix::Identity(dim, dim)) : random_start(lay, dim, cfg.seed + static_cast<std::uint64_t>(k));
    AscentResult a = barrier_ascent(rm, sm, alpha, lay, start, 1e-2, cfg.max_iter);
    iterations += a.iterations;
    if (a.value > best.value) best = std::move(a);
  }
  const Matrix omega = best.omega;
  const double value = best.value;

  // Sensitivity to the floor: continue from the optimum with delta / 10.
  ConeLayout tenth = lay;
  tenth.delta = cone.delta / 10.0;
  out.value_tenth_delta = barrier_ascent(rm, sm, alpha, tenth, omega, 1e-9, std::max(50, cfg.max_iter / 10)).value;

  out.omega = HermitianOp(omega, r.dims(), r.b_indices());
  out.value = ExtReal::finite(value);
  out.status = best.converged ? SolverStatus::Converged : SolverStatus::Budget;
  out.iterations = iterations;
  out.nu_at_scale = nu_value(rm, sm, omega * optimal_scale(rho, sigma, out.omega, alpha), alpha);
  return out;
}

BoundResult plo_exact(const DensityOp& rho, const DensityOp& sigma, double alpha, MeasurementClass cls,
                      const SearchConfig& cfg) {
  if (!(alpha > 0.0)) throw DomainError("Renyi order must be positive");
  if (cls != MeasurementClass::PLO && cls != MeasurementClass::PLOCC1)
    throw DomainError("projective search supports the P-LO and P-LOCC1 classes");
  const detail::AbPair pair = detail::to_ab_order(rho, sigma);
  detail::LocalFamily fam{pair.da, pair.db, pair.da, pair.db, false};
  detail::SearchOutcome best = detail::search_local(pair, fam, alpha, cfg.restarts, cfg.max_evals, cfg.seed, cfg.tol);
  int evaluations = best.evaluations;
  if (cls == MeasurementClass::PLOCC1 && !std::isinf(best.value)) {
    detail::LocalFamily one_way = fam;
    one_way.conditional = true;
    const int na = fam.out_a * fam.out_a, nb = fam.out_b * fam.out_b;
    Eigen::VectorXd start(one_way.param_count());
    start.head(na) = best.params.head(na);
    for (int x = 0; x < fam.out_a; ++x) start.segment(na + x * nb, nb) = best.params.tail(nb);
    detail::SearchOutcome cond =
        detail::search_local(pair, one_way, alpha, cfg.restarts, cfg.max_evals, cfg.seed + 7919, cfg.tol, start);
    evaluations += cond.evaluations;
    if (cond.value >= best.value) {
      best = cond;
      fam = one_way;
    }
  }
  BoundResult out;
  out.povm = detail::to_povm(pair, fam, detail::decode(fam, best.params), cls);
  out.value = std::isinf(best.value) ? ExtReal::inf() : ExtReal::finite(best.value);
  out.kind = BoundKind::Lower;
  out.alpha = alpha;
  out.measurement_class = cls;
  out.status = best.converged ? SolverStatus::Converged : SolverStatus::Budget;
  out.iterations = evaluations;
  out.note = "projective local eigenbases with closed-form inner scaling";
  return out;
}

}  // namespace mrd
