#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "mrd/povm.hpp"
#include "mrd/states.hpp"

using namespace mrd;
using namespace testing_support;

TEST_CASE("born on the maximally mixed state") {
  const DensityOp pi(0.25 * HermitianOp::identity({2, 2}, {1}));
  const auto iso = isotropic_measurement(2);
  const auto mu = born(pi, iso);
  for (std::size_t z = 0; z < iso.size(); ++z) CHECK(mu[z] == doctest::Approx(iso.elements()[z].trace() / 4));
}

TEST_CASE("local basis statistics of Phi and Phi-perp") {
  for (int d = 2; d <= 4; ++d) {
    const auto l = local_basis_measurement(d);
    CHECK(l.size() == static_cast<std::size_t>(d * d));
    CHECK(l.class_tag() == MeasurementClass::PLO);
    const auto mu = born(max_entangled(d), l), nu = born(phi_perp(d), l);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const std::size_t z = static_cast<std::size_t>(i * d + j);
        CHECK(l.labels()[z] == std::to_string(i) + "|" + std::to_string(j));
        CHECK(mu[z] == doctest::Approx(i == j ? 1.0 / d : 0.0));
        CHECK(nu[z] == doctest::Approx((1 - (i == j ? 1.0 / d : 0.0)) / (d * d - 1.0)));
      }
  }
}

TEST_CASE("local basis statistics of the symmetric state") {
  for (int d = 2; d <= 3; ++d) {
    const auto mu = born(werner({d, 1.0}), local_basis_measurement(d));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        CHECK(mu[static_cast<std::size_t>(i * d + j)] == doctest::Approx((1.0 + (i == j)) / (d * (d + 1.0))));
  }
}

TEST_CASE("product of local bases equals the local basis") {
  const auto a = rank_one_povm(Matrix::Identity(3, 3)), b = rank_one_povm(Matrix::Identity(3, 3));
  const auto p = product(a, b);
  const auto l = local_basis_measurement(3);
  REQUIRE(p.size() == l.size());
  for (std::size_t z = 0; z < p.size(); ++z) {
    CHECK(max_abs(p.elements()[z].matrix() - l.elements()[z].matrix()) == 0.0);
    CHECK(p.labels()[z] == l.labels()[z]);
  }
  CHECK(p.class_tag() == MeasurementClass::LO);
  CHECK(class_check(p, MeasurementClass::PLO).pass);
}

TEST_CASE("tensor power of the local basis is a local basis up to label order") {
  const auto l2 = povm_tensor_power(local_basis_measurement(2), 2);
  const auto l4 = local_basis_measurement(4);
  REQUIRE(l2.size() == l4.size());
  std::vector<int> matched(l4.size(), 0);
  for (const auto& e : l2.elements())
    for (std::size_t z = 0; z < l4.size(); ++z)
      if (max_abs(e.matrix() - l4.elements()[z].matrix()) == 0.0) ++matched[z];
  for (int m : matched) CHECK(m == 1);
  CHECK(l2.elements().front().b_indices() == std::vector<int>{2, 3});
  CHECK(class_check(l2, MeasurementClass::LO).pass);
}

TEST_CASE("tensor power statistics factorize on product states") {
  std::mt19937_64 rng(51);
  const auto rho = random_state(2, 2, rng);
  const auto tau = random_state(2, 2, rng);
  const Matrix w = random_unitary(2, rng);
  const auto local = product(rank_one_povm(w), rank_one_povm(random_unitary(2, rng)));
  const auto both = povm_tensor_power(local, 2);
  // rho (x) tau in block order.
  const HermitianOp joint = permute_subsystems(tensor(rho.op(), tau.op()), {0, 2, 1, 3});
  const auto mu = born(DensityOp(joint), both);
  const auto m1 = born(rho, local), m2 = born(tau, local);
  for (std::size_t x = 0; x < m1.size(); ++x)
    for (std::size_t y = 0; y < m2.size(); ++y) CHECK(mu[x * m2.size() + y] == doctest::Approx(m1[x] * m2[y]).epsilon(1e-12));
}

TEST_CASE("Phi test and the isotropic measurement") {
  for (int d = 2; d <= 3; ++d) {
    const auto t = binary_from_operator(max_entangled(d).op());
    CHECK(t.class_tag() == MeasurementClass::ALL);
    const auto mu = born(max_entangled(d), t), nu = born(phi_perp(d), t);
    CHECK(mu[0] == doctest::Approx(1.0));
    CHECK(mu[1] == doctest::Approx(0.0));
    CHECK(nu[0] == doctest::Approx(0.0));
    CHECK(nu[1] == doctest::Approx(1.0));
    const auto check = class_check(t, MeasurementClass::PPT);
    CHECK_FALSE(check.pass);
    CHECK(check.reason.find("eigenvalue") != std::string::npos);

    const auto iso = isotropic_measurement(d);
    CHECK(iso.class_tag() == MeasurementClass::PPT);
    CHECK(class_check(iso, MeasurementClass::PPT).pass);
    for (double p : {0.0, 0.2, 0.7, 1.0}) {
      const auto s = born(isotropic({d, p}), iso);
      CHECK(s[0] == doctest::Approx(p + (1 - p) / (d + 1.0)).epsilon(1e-13));
      CHECK(s[1] == doctest::Approx(d * (1 - p) / (d + 1.0)).epsilon(1e-13));
    }
  }
}

TEST_CASE("class lattice") {
  using C = MeasurementClass;
  CHECK(class_contains(C::ALL, C::PPT));
  CHECK(class_contains(C::PPT, C::SEP));
  CHECK(class_contains(C::SEP, C::LOCC1));
  CHECK(class_contains(C::LOCC1, C::LO));
  CHECK(class_contains(C::LO, C::PLO));
  CHECK(class_contains(C::PLOCC1, C::PLO));
  CHECK_FALSE(class_contains(C::LO, C::LOCC1));
  CHECK_FALSE(class_contains(C::PLOCC1, C::LO));
  CHECK_FALSE(class_contains(C::SEP, C::PPT));

  const auto l = local_basis_measurement(2);
  for (C c : {C::PLO, C::LO, C::PLOCC1, C::LOCC1, C::SEP, C::PPT, C::ALL}) CHECK(class_check(l, c).pass);

  std::mt19937_64 rng(52);
  const auto pa = rank_one_povm(random_unitary(2, rng));
  std::vector<Povm> cond = {rank_one_povm(random_unitary(2, rng)), rank_one_povm(random_unitary(2, rng))};
  const auto c1 = conditional(pa, cond);
  CHECK(c1.class_tag() == C::LOCC1);
  CHECK(class_check(c1, C::LOCC1).pass);
  CHECK(class_check(c1, C::PLOCC1).pass);
  CHECK_FALSE(class_check(c1, C::LO).pass);
  CHECK(class_check(c1, C::SEP).pass);
  CHECK(class_check(c1, C::PPT).pass);

  // Non-projective local POVM: trine on A.
  Matrix trine(2, 3);
  for (int k = 0; k < 3; ++k) {
    const double th = 2 * M_PI * k / 3;
    trine(0, k) = std::sqrt(2.0 / 3) * std::cos(th / 2);
    trine(1, k) = std::sqrt(2.0 / 3) * std::sin(th / 2);
  }
  const auto tr = product(rank_one_povm(trine), rank_one_povm(Matrix::Identity(2, 2)));
  CHECK(class_check(tr, C::LO).pass);
  CHECK_FALSE(class_check(tr, C::PLO).pass);

  // A PPT measurement without a product record cannot be confirmed separable.
  const auto iso = isotropic_measurement(2);
  const auto sep = class_check(iso, C::SEP);
  CHECK_FALSE(sep.pass);
  CHECK(sep.reason == "undecidable");
}

TEST_CASE("validation") {
  const auto id = HermitianOp::identity({2});
  CHECK_THROWS_AS(Povm({0.5 * id, 0.4 * id}, {}, MeasurementClass::ALL), ValidationError);
  try {
    Povm({0.5 * id, 0.4 * id}, {}, MeasurementClass::ALL);
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("residual") != std::string::npos);
  }
  RealVector v(2);
  v << 1.5, -0.5;
  CHECK_THROWS_AS(Povm({HermitianOp::diagonal(v), id - HermitianOp::diagonal(v)}, {}, MeasurementClass::ALL),
                  ValidationError);
  CHECK_THROWS_AS(binary_from_operator(2.0 * id), ValidationError);
  CHECK_THROWS_AS(born(max_entangled(2), local_basis_measurement(3)), StructuralError);
}

TEST_CASE("born statistics are normalized") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    const auto rho = random_state(2, 3, rng);
    const auto p = product(rank_one_povm(random_unitary(2, rng)), rank_one_povm(random_unitary(3, rng)));
    CHECK(std::abs(born(rho, p).total() - 1.0) <= 1e-10);
  }
}

TEST_CASE("coarse-graining never increases the divergence") {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 30; ++trial) {
    const auto rho = random_state(2, 2, rng), sigma = random_state(2, 2, rng);
    const auto p = product(rank_one_povm(random_unitary(2, rng)), rank_one_povm(random_unitary(2, rng)));
    const auto merged = coarse_grain(p, {0, 1, 1, 2});
    for (double a : {0.5, 1.0, 2.0, kAlphaInfinity})
      CHECK(renyi(born(rho, merged), born(sigma, merged), a).value <=
            renyi(born(rho, p), born(sigma, p), a).value + 1e-12);
  }
}

TEST_CASE("POVM JSON round trip") {
  const auto iso = isotropic_measurement(2);
  const auto back = povm_from_json(povm_to_json(iso));
  CHECK(back.class_tag() == MeasurementClass::PPT);
  CHECK(back.labels() == iso.labels());
  for (std::size_t z = 0; z < iso.size(); ++z)
    CHECK(max_abs(back.elements()[z].matrix() - iso.elements()[z].matrix()) == 0.0);
  const auto lo = povm_from_json(povm_to_json(local_basis_measurement(2)));
  CHECK(lo.class_tag() == MeasurementClass::PLO);
  CHECK_FALSE(class_check(lo, MeasurementClass::LO).pass);
}
