#pragma once

// Test-side oracles and random generators. These deliberately avoid the
// library's own algorithms so that comparisons are independent.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "mrd/linops.hpp"

namespace testing_support {

using mrd::Complex;
using mrd::Matrix;

inline Matrix random_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = Complex(g(rng), g(rng));
  return m;
}

inline Matrix random_hermitian(int n, std::mt19937_64& rng) {
  Matrix m = random_matrix(n, rng);
  return (m + m.adjoint()) * 0.5;
}

/// Full-rank random density matrix (Ginibre).
inline Matrix random_density(int n, std::mt19937_64& rng) {
  Matrix g = random_matrix(n, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return (rho + rho.adjoint()) * 0.5;
}

inline mrd::DensityOp random_state(int da, int db, std::mt19937_64& rng) {
  return mrd::DensityOp(mrd::HermitianOp(random_density(da * db, rng), {da, db}, {1}));
}

inline Matrix random_unitary(int n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(n, rng));
  Matrix q = qr.householderQ();
  return q;
}

/// Partial transpose on the second factor of a d_a x d_b operator, written
/// out index by index.
inline Matrix pt_second(const Matrix& m, int da, int db) {
  Matrix out(da * db, da * db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < db; ++j)
      for (int k = 0; k < da; ++k)
        for (int l = 0; l < db; ++l) out(i * db + l, k * db + j) = m(i * db + j, k * db + l);
  return out;
}

/// Swap operator on d x d built from its action |ij> -> |ji>.
inline Matrix swap_matrix(int d) {
  Matrix f = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) f(j * d + i, i * d + j) = 1.0;
  return f;
}

/// |Phi><Phi| with |Phi> = sum_i |ii>/sqrt(d).
inline Matrix phi_matrix(int d) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(double(d));
  return v * v.adjoint();
}

/// Classical Renyi divergence in nats written independently of the library.
inline double renyi_oracle(const std::vector<double>& mu, const std::vector<double>& nu, double alpha) {
  const double inf = std::numeric_limits<double>::infinity();
  if (std::isinf(alpha)) {
    double best = -inf;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      if (mu[i] <= 0) continue;
      if (nu[i] <= 0) return inf;
      best = std::max(best, std::log(mu[i] / nu[i]));
    }
    return best;
  }
  if (alpha == 1.0) {
    double s = 0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      if (mu[i] <= 0) continue;
      if (nu[i] <= 0) return inf;
      s += mu[i] * std::log(mu[i] / nu[i]);
    }
    return s;
  }
  double q = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] <= 0) continue;
    if (nu[i] <= 0) {
      if (alpha > 1) return inf;
      continue;
    }
    q += std::pow(mu[i], alpha) * std::pow(nu[i], 1 - alpha);
  }
  if (q <= 0) return inf;
  return std::log(q) / (alpha - 1);
}

inline std::vector<double> random_distribution(int n, std::mt19937_64& rng, double floor = 0.0) {
  std::uniform_real_distribution<double> u(floor, 1.0);
  std::vector<double> v(static_cast<std::size_t>(n));
  double s = 0;
  for (auto& x : v) s += (x = u(rng));
  for (auto& x : v) x /= s;
  return v;
}

}  // namespace testing_support
