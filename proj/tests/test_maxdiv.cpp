#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "mrd/maxdiv.hpp"
#include "mrd/states.hpp"

using namespace mrd;
using namespace testing_support;

namespace {

// Smallest lambda with lambda sigma - rho >= 0, by bisection on the minimal
// eigenvalue (sigma full rank).
double dmax_oracle(const Matrix& rho, const Matrix& sigma) {
  auto ok = [&](double l) {
    return Eigen::SelfAdjointEigenSolver<Matrix>(Matrix(l * sigma - rho)).eigenvalues().minCoeff() >= 0;
  };
  double lo = 0, hi = 1;
  while (!ok(hi)) hi *= 2;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return std::log(hi);
}

}  // namespace

TEST_CASE("quantum max-divergence") {
  CHECK(quantum_max_divergence(max_entangled(3), max_entangled(3)).value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(quantum_max_divergence(max_entangled(2), phi_perp(2)).infinite);
  for (double q : {0.1, 0.5, 0.9})
    CHECK(quantum_max_divergence(max_entangled(2), isotropic({2, q})).value ==
          doctest::Approx(-std::log(q)).epsilon(1e-10));
  std::mt19937_64 rng(41);
  for (int t = 0; t < 5; ++t) {
    const DensityOp rho = random_state(2, 2, rng), sigma = random_state(2, 2, rng);
    CHECK(quantum_max_divergence(rho, sigma).value ==
          doctest::Approx(dmax_oracle(rho.matrix(), sigma.matrix())).epsilon(1e-9));
  }
}

TEST_CASE("PPT primal on the extremal pairs") {
  const BoundResult r = ppt_max_primal(max_entangled(2), phi_perp(2));
  CHECK(r.kind == BoundKind::Lower);
  CHECK(r.value.value <= std::log(3.0) + 1e-9);
  CHECK(std::log(3.0) - r.value.value <= 1e-5);

  const BoundResult w = ppt_max_primal(antisymmetric_state(3), symmetric_state(3));
  CHECK(std::abs(w.value.value - std::log(2.0)) <= 1e-5);

  const BoundResult same = ppt_max_primal(isotropic({2, 0.3}), isotropic({2, 0.3}));
  CHECK(std::abs(same.value.value) <= 1e-9);
}

TEST_CASE("PPT dual recovers log lambda with a valid certificate") {
  struct Case {
    DensityOp rho, sigma;
    double expect;
  };
  const std::vector<Case> cases = {
      {max_entangled(2), phi_perp(2), std::log(3.0)},
      {tensor_power(max_entangled(2), 2), tensor_power(phi_perp(2), 2), 2 * std::log(3.0)},
      {isotropic({2, 0.4}), isotropic({2, 0.4}), 0.0},
  };
  for (const Case& c : cases) {
    const BoundResult r = ppt_max_dual(c.rho, c.sigma);
    CHECK(r.kind == BoundKind::Upper);
    CHECK(std::abs(r.value.value - c.expect) <= 1e-4);
    CHECK(r.value.value >= c.expect - 1e-9);
    REQUIRE(r.certificate.has_value());
    const CertCheck chk = check_certificate(*r.certificate, c.rho, c.sigma);
    CHECK(chk.pass);
  }
}

TEST_CASE("weak and strong duality on random pairs") {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 10; ++t) {
    const DensityOp rho = random_state(2, 2, rng), sigma = random_state(2, 2, rng);
    MaxDivConfig cfg;
    const BoundResult primal = ppt_max_primal(rho, sigma, cfg);
    cfg.lambda_lo = std::exp(primal.value.value);
    const BoundResult dual = ppt_max_dual(rho, sigma, cfg);
    CHECK(primal.value.value <= dual.value.value + 2e-9);
    CHECK(dual.value.value - primal.value.value <= 1e-4);
    // PPT-measured never exceeds the unrestricted value.
    CHECK(primal.value.value <= quantum_max_divergence(rho, sigma).value + 1e-9);
  }
}

TEST_CASE("data hiding: finite PPT value where the quantum one is infinite") {
  CHECK(quantum_max_divergence(antisymmetric_state(2), symmetric_state(2)).infinite);
  CHECK(std::abs(ppt_max_dual(antisymmetric_state(2), symmetric_state(2)).value.value - std::log(3.0)) <= 1e-4);
}

TEST_CASE("Phi vs Phi-perp certificate has the predicted spectrum") {
  for (int d = 2; d <= 3; ++d)
    for (int n = 1; n <= (d == 2 ? 3 : 2); ++n) {
      const DualCertificate c = explicit_certificate(CertFamily::PhiVsPerp, d, n);
      CHECK(c.lambda == doctest::Approx(std::pow(d + 1.0, n)).epsilon(1e-14));
      CHECK(c.residual <= 1e-9);
      // Eigenvalues of the swap are +-1; on k copies with +1 the value is
      // [(1 - 1/d)^k (1 + 1/d)^(n-k) - (d-1)^n (1/d)^k (-1/d)^(n-k)] / (d-1)^n.
      std::vector<double> predicted;
      for (int k = 0; k <= n; ++k)
        predicted.push_back((std::pow(1 - 1.0 / d, k) * std::pow(1 + 1.0 / d, n - k) -
                             std::pow(d - 1.0, n) * std::pow(1.0 / d, k) * std::pow(-1.0 / d, n - k)) /
                            std::pow(d - 1.0, n));
      const auto ev = Eigen::SelfAdjointEigenSolver<Matrix>(c.y.matrix()).eigenvalues();
      for (int i = 0; i < ev.size(); ++i) {
        double gap = 1e300;
        for (double v : predicted) gap = std::min(gap, std::abs(ev(i) - v));
        CHECK(gap <= 1e-10);
        CHECK(ev(i) >= -1e-10);
      }
    }
}

TEST_CASE("isotropic and Werner certificates") {
  const DualCertificate iso = explicit_certificate(CertFamily::Isotropic, 2, 2, 0.25, 0.125);
  CHECK(iso.lambda == doctest::Approx(1.44).epsilon(1e-14));

  const DualCertificate same = explicit_certificate(CertFamily::Werner, 3, 2, 1.0, 1.0);
  CHECK(same.lambda == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(same.y.max_norm() <= 1e-12);

  const DualCertificate anti = explicit_certificate(CertFamily::AntiVsSym, 3, 2);
  CHECK(anti.lambda == doctest::Approx(4.0).epsilon(1e-14));

  // One point per case, d = 2, 3, n = 1, 2.
  for (int d = 2; d <= 3; ++d) {
    const double t = 1.0 / d;
    const std::vector<std::pair<double, double>> iso_points = {
        {0.8 * t, 0.3 * t}, {0.9, 0.5 * t * t / 0.9}, {0.7, 0.7}};
    const std::vector<std::pair<double, double>> werner_points = {{0.6, 0.9}, {0.3, 0.9}, {0.2, 0.2}};
    for (int n = 1; n <= 2; ++n) {
      for (auto [p, q] : iso_points) {
        const DualCertificate c = explicit_certificate(CertFamily::Isotropic, d, n, p, q);
        CHECK(c.lambda == doctest::Approx(std::pow((p * d + 1) / (q * d + 1), n)).epsilon(1e-14));
      }
      for (auto [p, q] : werner_points) {
        const DualCertificate c = explicit_certificate(CertFamily::Werner, d, n, p, q);
        const auto [rho, sigma] = certificate_states(CertFamily::Werner, d, n, p, q);
        CHECK(check_certificate(c, rho, sigma).pass);
      }
    }
  }
}

TEST_CASE("certificates refuse points outside the additivity cases") {
  CHECK_THROWS_WITH_AS(explicit_certificate(CertFamily::Isotropic, 2, 1, 0.2, 0.4), doctest::Contains("case"),
                       DomainError);
  CHECK_THROWS_WITH_AS(explicit_certificate(CertFamily::Isotropic, 2, 1, 0.3, 0.45),
                       doctest::Contains("case 1"), DomainError);
  CHECK_THROWS_WITH_AS(explicit_certificate(CertFamily::Isotropic, 2, 1, 0.9, 0.45),
                       doctest::Contains("case 2"), DomainError);
  CHECK_THROWS_WITH_AS(explicit_certificate(CertFamily::Werner, 2, 1, 0.8, 0.6), doctest::Contains("case 1"),
                       DomainError);
  CHECK_THROWS_WITH_AS(explicit_certificate(CertFamily::Werner, 2, 1, 0.1, 0.3), doctest::Contains("case 3"),
                       DomainError);
  CHECK_THROWS_AS(explicit_certificate(CertFamily::PhiVsPerp, 1, 1), DomainError);
}

TEST_CASE("the certificate bounds the numerical dual") {
  const DualCertificate c = explicit_certificate(CertFamily::Isotropic, 2, 1, 0.9, 0.2);
  const auto [rho, sigma] = certificate_states(CertFamily::Isotropic, 2, 1, 0.9, 0.2);
  // Bisection stops at relative width 1e-6 in lambda.
  CHECK(ppt_max_dual(rho, sigma).value.value <= std::log(c.lambda) + 1e-6);
}

TEST_CASE("certificate JSON carries the family record") {
  const nlohmann::json j = certificate_to_json(explicit_certificate(CertFamily::PhiVsPerp, 2, 1));
  CHECK(j["family"] == "phi_vs_perp");
  CHECK(j["n"] == 1);
  CHECK(j["lambda"].get<double>() == doctest::Approx(3.0));
  CHECK(j.contains("X"));
  CHECK(j.contains("Y"));
}
