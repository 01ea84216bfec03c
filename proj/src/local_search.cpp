#include "local_search.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mrd/classical.hpp"
#include "mrd/optim.hpp"

namespace mrd::detail {

AbPair to_ab_order(const DensityOp& rho, const DensityOp& sigma) {
  if (rho.dims() != sigma.dims()) throw StructuralError("states act on different spaces");
  const HermitianOp& r = rho.op();
  if (!r.has_bipartition()) throw StructuralError("local measurements need a declared bipartition");
  const int k = static_cast<int>(r.dims().size());
  std::vector<char> is_b(static_cast<std::size_t>(k), 0);
  for (int b : r.b_indices()) is_b[static_cast<std::size_t>(b)] = 1;
  std::vector<int> order;
  for (int side = 0; side < 2; ++side)
    for (int s = 0; s < k; ++s)
      if (is_b[static_cast<std::size_t>(s)] == side) order.push_back(s);
  const HermitianOp rp = permute_subsystems(r, order);
  const HermitianOp sp = permute_subsystems(sigma.op().with_bipartition(r.b_indices()), order);
  return {rp.matrix(), sp.matrix(), rp.dim_a(), rp.dim_b(), rp.dims(), rp.b_indices(), order};
}

Matrix unitary_from_params(const double* p, int n) {
  Matrix h = Matrix::Zero(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i) h(i, i) = p[k++];
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Complex z(p[k], p[k + 1]);
      k += 2;
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Eigen::VectorXcd phases(n);
  for (int i = 0; i < n; ++i) phases(i) = std::exp(Complex(0.0, es.eigenvalues()(i)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

LocalMeasurement decode(const LocalFamily& fam, const Eigen::VectorXd& params) {
  LocalMeasurement m;
  const double* p = params.data();
  m.w = unitary_from_params(p, fam.out_a).topRows(fam.da);
  p += fam.out_a * fam.out_a;
  const int nb = fam.conditional ? fam.out_a : 1;
  for (int x = 0; x < nb; ++x) {
    m.v.push_back(unitary_from_params(p, fam.out_b).topRows(fam.db));
    p += fam.out_b * fam.out_b;
  }
  return m;
}

std::vector<double> local_statistics(const Matrix& state, const LocalMeasurement& m) {
  const Eigen::Index out_a = m.w.cols(), out_b = m.v.front().cols();
  const Eigen::Index da = m.w.rows(), db = m.v.front().rows();
  Matrix k(da * db, out_a * out_b);
  for (Eigen::Index x = 0; x < out_a; ++x) {
    const Matrix& v = m.v.size() == 1 ? m.v.front() : m.v[static_cast<std::size_t>(x)];
    for (Eigen::Index y = 0; y < out_b; ++y) k.col(x * out_b + y) = kron(m.w.col(x), v.col(y));
  }
  const Matrix rk = state * k;
  std::vector<double> probs(static_cast<std::size_t>(out_a * out_b));
  double total = 0.0;
  for (Eigen::Index c = 0; c < k.cols(); ++c) {
    const double v = std::max(0.0, k.col(c).dot(rk.col(c)).real());
    probs[static_cast<std::size_t>(c)] = v;
    total += v;
  }
  for (double& v : probs) v /= total;
  return probs;
}

Povm to_povm(const AbPair& pair, const LocalFamily& fam, const LocalMeasurement& m, MeasurementClass tag) {
  const Povm a = rank_one_povm(m.w);
  Povm out = [&] {
    if (!fam.conditional) return product(a, rank_one_povm(m.v.front()));
    std::vector<Povm> bs;
    for (const auto& v : m.v) bs.push_back(rank_one_povm(v));
    return conditional(a, bs);
  }();
  std::vector<int> inverse(pair.order.size());
  for (std::size_t k = 0; k < pair.order.size(); ++k) inverse[static_cast<std::size_t>(pair.order[k])] = static_cast<int>(k);
  std::vector<HermitianOp> el;
  for (const auto& e : out.elements())
    el.push_back(permute_subsystems(HermitianOp(e.matrix(), pair.dims, pair.b_indices), inverse));
  return Povm(std::move(el), out.labels(), tag, out.construction());
}

void merge_negligible(std::vector<double>& mu, std::vector<double>& nu) {
  constexpr double kSigmaRoundoff = 1e-13, kRhoNegligible = 1e-9;
  const auto target = static_cast<std::size_t>(std::max_element(nu.begin(), nu.end()) - nu.begin());
  for (std::size_t z = 0; z < mu.size(); ++z) {
    if (z == target || nu[z] > kSigmaRoundoff || mu[z] > kRhoNegligible) continue;
    mu[target] += mu[z];
    nu[target] += nu[z];
    mu[z] = nu[z] = 0.0;
  }
}

SearchOutcome search_local(const AbPair& pair, const LocalFamily& fam, double alpha, int restarts, int max_evals,
                           std::uint64_t seed, double tol, const Eigen::VectorXd& start) {
  const int n = fam.param_count();
  auto objective = [&](const Eigen::VectorXd& params) {
    const LocalMeasurement m = decode(fam, params);
    std::vector<double> mu = local_statistics(pair.rho, m), nu = local_statistics(pair.sigma, m);
    merge_negligible(mu, nu);
    return renyi(FiniteMeasure(std::move(mu)), FiniteMeasure(std::move(nu)), alpha).as_double();
  };
  SearchOutcome best;
  best.value = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, restarts); ++r) {
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
    if (r == 0 && start.size() == n) {
      x0 = start;
    } else if (r > 0) {
      std::mt19937_64 rng(seed + static_cast<std::uint64_t>(r));
      std::normal_distribution<double> g(0.0, 1.0);
      for (int i = 0; i < n; ++i) x0(i) = g(rng);
    }
    const NelderMeadResult res = nelder_mead_max(objective, x0, 0.5, max_evals, tol);
    best.evaluations += res.evaluations;
    if (res.value > best.value) {
      best.value = res.value;
      best.params = res.x;
      best.converged = res.converged;
    }
    if (std::isinf(best.value)) break;
  }
  return best;
}

}  // namespace mrd::detail
