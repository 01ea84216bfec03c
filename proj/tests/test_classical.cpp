#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "mrd/classical.hpp"

using namespace mrd;
using namespace testing_support;

namespace {

const double kInf = kAlphaInfinity;

double value(const FiniteMeasure& a, const FiniteMeasure& b, double alpha) { return renyi(a, b, alpha).as_double(); }

std::vector<double> push(const std::vector<std::vector<double>>& channel, const std::vector<double>& mu) {
  std::vector<double> out(channel.size(), 0.0);
  for (std::size_t y = 0; y < channel.size(); ++y)
    for (std::size_t x = 0; x < mu.size(); ++x) out[y] += channel[y][x] * mu[x];
  return out;
}

}  // namespace

TEST_CASE("q_alpha examples") {
  const FiniteMeasure u({0.5, 0.5});
  CHECK(q_alpha(u, u, 2.0).value == doctest::Approx(1.0));
  CHECK(q_alpha(FiniteMeasure({1, 0}), FiniteMeasure({0, 1}), 0.5).value == 0.0);
  CHECK(q_alpha(FiniteMeasure({1, 0}), u, 2.0).value == doctest::Approx(2.0));
  CHECK(q_alpha(FiniteMeasure({1, 0}), FiniteMeasure({0, 1}), 2.0).infinite);
  CHECK_THROWS_AS(q_alpha(u, u, 1.0), DomainError);
  CHECK_THROWS_AS(q_alpha(u, u, -0.5), DomainError);
  CHECK_THROWS_AS(q_alpha(u, FiniteMeasure({1.0}), 0.5), StructuralError);
}

TEST_CASE("renyi examples") {
  const FiniteMeasure a({1, 0}), u({0.5, 0.5});
  for (double alpha : {0.3, 0.5, 1.0, 2.0, 5.0, kInf}) CHECK(value(u, u, alpha) == doctest::Approx(0.0));
  for (double alpha : {2.0, 1.0, kInf}) CHECK(value(a, u, alpha) == doctest::Approx(std::log(2.0)));
  CHECK(renyi(a, FiniteMeasure({0, 1}), 0.5).infinite);
  CHECK(renyi(a, FiniteMeasure({0, 1}), 1.0).infinite);
  CHECK(renyi(a, FiniteMeasure({0, 1}), kInf).infinite);
  // mu not absolutely continuous but not orthogonal: finite below 1, infinite from 1 on.
  const FiniteMeasure m({0.5, 0.5}), n({1.0, 0.0});
  CHECK(renyi(m, n, 0.5).is_finite());
  CHECK(renyi(m, n, 1.0).infinite);
  CHECK(renyi(m, n, 3.0).infinite);
  CHECK_THROWS_AS(renyi(FiniteMeasure({0.5, 0.6}), u, 2.0), DomainError);
}

TEST_CASE("local basis statistics of Phi and Phi-perp give log 3 at d=2") {
  const int d = 2;
  std::vector<double> mu, nu;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      mu.push_back(i == j ? 1.0 / d : 0.0);
      nu.push_back((1.0 - (i == j ? 1.0 / d : 0.0)) / (d * d - 1.0));
    }
  for (double alpha : {0.1, 0.5, 1.0, 2.0, 7.0, kInf})
    CHECK(value(FiniteMeasure(mu), FiniteMeasure(nu), alpha) == doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("zero floor treats numerical dust as zero") {
  const FiniteMeasure mu({1.0 - 1e-17, 1e-17}), nu({1e-17, 1.0 - 1e-17});
  CHECK(renyi(mu, nu, 0.5).infinite);
}

TEST_CASE("agreement with the independent oracle") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 5;
    const auto mu = random_distribution(n, rng), nu = random_distribution(n, rng);
    for (double alpha : {0.2, 0.5, 0.9, 1.0, 1.5, 3.0, kInf})
      CHECK(value(FiniteMeasure(mu), FiniteMeasure(nu), alpha) ==
            doctest::Approx(renyi_oracle(mu, nu, alpha)).epsilon(1e-12));
  }
}

TEST_CASE("monotone in alpha") {
  std::mt19937_64 rng(32);
  const std::vector<double> grid = {0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0, kInf};
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 4;
    const FiniteMeasure mu(random_distribution(n, rng)), nu(random_distribution(n, rng, 0.01));
    double prev = -1;
    for (double a : grid) {
      const double v = value(mu, nu, a);
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("additive on products") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 50; ++trial) {
    const FiniteMeasure m1(random_distribution(3, rng)), n1(random_distribution(3, rng));
    const FiniteMeasure m2(random_distribution(2, rng)), n2(random_distribution(2, rng));
    for (double a : {0.3, 1.0, 2.5, kInf})
      CHECK(std::abs(value(m1.product(m2), n1.product(n2), a) - value(m1, n1, a) - value(m2, n2, a)) <= 1e-10);
  }
}

TEST_CASE("classical data processing under random stochastic maps") {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 100; ++trial) {
    const int nx = 4, ny = 2 + trial % 3;
    std::vector<std::vector<double>> channel(static_cast<std::size_t>(ny), std::vector<double>(nx));
    for (int x = 0; x < nx; ++x) {
      const auto col = random_distribution(ny, rng);
      for (int y = 0; y < ny; ++y) channel[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] = col[static_cast<std::size_t>(y)];
    }
    const auto mu = random_distribution(nx, rng), nu = random_distribution(nx, rng);
    for (double a : {0.3, 0.5, 1.0, 2.0, kInf})
      CHECK(value(FiniteMeasure(push(channel, mu)), FiniteMeasure(push(channel, nu)), a) <=
            value(FiniteMeasure(mu), FiniteMeasure(nu), a) + 1e-10);
  }
}

TEST_CASE("Pinsker-type lower bound for alpha in (0,1]") {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 4;
    const auto mu = random_distribution(n, rng), nu = random_distribution(n, rng);
    double tv = 0;
    for (int i = 0; i < n; ++i) tv += std::abs(mu[static_cast<std::size_t>(i)] - nu[static_cast<std::size_t>(i)]);
    tv /= 2;
    for (double a : {0.1, 0.5, 0.8, 1.0}) CHECK(value(FiniteMeasure(mu), FiniteMeasure(nu), a) >= a / 2 * tv * tv - 1e-12);
  }
}

TEST_CASE("continuity across alpha = 1") {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 50; ++trial) {
    const FiniteMeasure mu(random_distribution(4, rng, 0.05)), nu(random_distribution(4, rng, 0.05));
    const double kl = value(mu, nu, 1.0);
    CHECK(std::abs(value(mu, nu, 1.0 + 1e-4) - kl) <= 1e-2);
    CHECK(std::abs(value(mu, nu, 1.0 - 1e-4) - kl) <= 1e-2);
  }
}
