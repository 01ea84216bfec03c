#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "mrd/io.hpp"
#include "mrd/linops.hpp"

using namespace mrd;
using namespace testing_support;

namespace {

HermitianOp phi_op(int d) { return HermitianOp(phi_matrix(d), {d, d}, {1}); }

}  // namespace

TEST_CASE("tensor of identities and basis projectors") {
  const auto id2 = HermitianOp::identity({2});
  const auto t = tensor(id2, id2);
  CHECK(max_abs(t.matrix() - Matrix::Identity(4, 4)) == 0.0);
  CHECK(t.dims() == std::vector<int>{2, 2});

  RealVector a(2), b(2);
  a << 1, 0;
  b << 0, 1;
  const auto p = tensor(HermitianOp::diagonal(a), HermitianOp::diagonal(b));
  RealVector expect(4);
  expect << 0, 1, 0, 0;
  CHECK(max_abs(p.matrix() - Matrix(expect.cast<Complex>().asDiagonal())) == 0.0);
}

TEST_CASE("tensor of two maximally entangled states has unit trace and rank one") {
  const auto t = tensor(phi_op(2), phi_op(2));
  CHECK(t.trace() == doctest::Approx(1.0).epsilon(1e-14));
  const auto s = eig_herm(t);
  int rank = 0;
  for (int i = 0; i < s.eigenvalues.size(); ++i) rank += s.eigenvalues(i) > 1e-10;
  CHECK(rank == 1);
  CHECK(t.b_indices() == std::vector<int>{1, 3});
}

TEST_CASE("partial transpose of Phi is the swap over d") {
  for (int d = 2; d <= 4; ++d) {
    const auto pt = partial_transpose(phi_op(d));
    CHECK(max_abs(pt.matrix() - swap_matrix(d) / double(d)) < 1e-15);
  }
  const auto ev = eig_herm(partial_transpose(phi_op(2))).eigenvalues;
  CHECK(ev(0) == doctest::Approx(-0.5));
  for (int i = 1; i < 4; ++i) CHECK(ev(i) == doctest::Approx(0.5));
}

TEST_CASE("partial transpose of a product transposes the B factor") {
  std::mt19937_64 rng(11);
  const Matrix x = random_hermitian(2, rng), y = random_hermitian(3, rng);
  const HermitianOp xy(kron(x, y), {2, 3}, {1});
  CHECK(max_abs(partial_transpose(xy).matrix() - kron(x, Matrix(y.transpose()))) < 1e-14);
}

TEST_CASE("partial transpose matches the index oracle, is involutive and trace preserving") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const int da = 2 + trial % 2, db = 2 + (trial / 2) % 3;
    const HermitianOp x(random_hermitian(da * db, rng), {da, db}, {1});
    const auto pt = partial_transpose(x);
    CHECK(max_abs(pt.matrix() - pt_second(x.matrix(), da, db)) == 0.0);
    CHECK(max_abs(partial_transpose(pt).matrix() - x.matrix()) == 0.0);
    CHECK(std::abs(pt.trace() - x.trace()) <= 1e-12);
  }
}

TEST_CASE("partial transpose without bipartition is a structural error") {
  CHECK_THROWS_AS(partial_transpose(HermitianOp::identity({2, 2})), StructuralError);
}

TEST_CASE("partial trace examples") {
  for (int d = 2; d <= 4; ++d) {
    const auto ra = partial_trace(phi_op(d), {0});
    CHECK(max_abs(ra.matrix() - Matrix::Identity(d, d) / double(d)) < 1e-15);
  }
  std::mt19937_64 rng(13);
  const Matrix rho = random_density(2, rng), sigma = random_hermitian(3, rng);
  const HermitianOp prod(kron(rho, sigma), {2, 3}, {1});
  CHECK(max_abs(partial_trace(prod, {0}).matrix() - rho * sigma.trace()) < 1e-13);
  const auto all = partial_trace(prod, {});
  CHECK(all.dim() == 1);
  CHECK(all.matrix()(0, 0).real() == doctest::Approx(prod.trace()));
  CHECK_THROWS_AS(partial_trace(prod, {2}), StructuralError);
}

TEST_CASE("tensor traces multiply") {
  std::mt19937_64 rng(14);
  const HermitianOp x(random_hermitian(3, rng)), y(random_hermitian(2, rng));
  CHECK(std::abs(tensor(x, y).trace() - x.trace() * y.trace()) <= 1e-12);
}

TEST_CASE("permute_subsystems swaps tensor factors") {
  std::mt19937_64 rng(15);
  const Matrix x = random_hermitian(2, rng), y = random_hermitian(3, rng);
  const HermitianOp xy(kron(x, y), {2, 3}, {1});
  const auto yx = permute_subsystems(xy, {1, 0});
  CHECK(max_abs(yx.matrix() - kron(y, x)) < 1e-15);
  CHECK(yx.dims() == std::vector<int>{3, 2});
  CHECK(yx.b_indices() == std::vector<int>{0});
}

TEST_CASE("eigendecomposition examples and reconstruction") {
  for (int d = 2; d <= 5; ++d) {
    const auto ev = eig_herm(HermitianOp::identity({d})).eigenvalues;
    for (int i = 0; i < d; ++i) CHECK(ev(i) == doctest::Approx(1.0));
  }
  const auto ev = eig_herm(phi_op(2)).eigenvalues;
  CHECK(std::abs(ev(0)) < 1e-15);
  CHECK(std::abs(ev(2)) < 1e-15);
  CHECK(ev(3) == doctest::Approx(1.0));

  std::mt19937_64 rng(16);
  for (int d = 1; d <= 6; ++d)
    for (int trial = 0; trial < 10; ++trial) {
      const HermitianOp x(random_hermitian(d, rng));
      const auto s = eig_herm(x);
      for (int i = 1; i < d; ++i) CHECK(s.eigenvalues(i - 1) <= s.eigenvalues(i));
      const Matrix rec = from_spectrum(s.eigenvectors, s.eigenvalues);
      CHECK(max_abs(x.matrix() - rec) <= 1e-9 * d * x.max_norm());
      CHECK(max_abs(s.eigenvectors.adjoint() * s.eigenvectors - Matrix::Identity(d, d)) < 1e-12);
    }
}

TEST_CASE("herm_fn examples") {
  CHECK(max_abs(herm_fn(HermitianOp::identity({3}), [](double t) { return std::pow(t, -0.7); }).matrix() -
                Matrix::Identity(3, 3)) < 1e-14);
  RealVector v(2);
  v << 4, 1;
  const auto r = herm_fn(HermitianOp::diagonal(v), [](double t) { return std::sqrt(t); });
  CHECK(r.matrix()(0, 0).real() == doctest::Approx(2.0));
  CHECK(r.matrix()(1, 1).real() == doctest::Approx(1.0));

  const double alpha = 0.25, beta = alpha / (alpha - 1.0);
  const auto w = herm_fn(2.0 * HermitianOp::identity({2}), [&](double t) { return std::pow(t, beta); }, 0.0);
  CHECK(max_abs(w.matrix() - std::pow(2.0, -1.0 / 3.0) * Matrix::Identity(2, 2)) < 1e-14);

  std::mt19937_64 rng(17);
  const HermitianOp x(random_hermitian(4, rng));
  CHECK(max_abs(herm_fn(x, [](double t) { return t; }).matrix() - x.matrix()) < 1e-12);

  v << 1, -0.5;
  try {
    herm_fn(HermitianOp::diagonal(v), [](double t) { return std::log(t); }, 0.0);
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("-0.5") != std::string::npos);
  }
}

TEST_CASE("project_psd examples and minimality") {
  std::mt19937_64 rng(18);
  const HermitianOp psd(random_density(4, rng));
  CHECK(max_abs(project_psd(psd).matrix() - psd.matrix()) < 1e-14);

  RealVector v(2);
  v << 1, -1;
  const auto p = project_psd(HermitianOp::diagonal(v));
  CHECK(std::abs(p.matrix()(0, 0).real() - 1.0) < 1e-15);
  CHECK(std::abs(p.matrix()(1, 1)) < 1e-15);

  // Phi^Gamma = F/2: the negative eigenvector is the singlet, eigenvalue -1/2.
  const auto pt = partial_transpose(phi_op(2));
  Eigen::VectorXcd singlet = Eigen::VectorXcd::Zero(4);
  singlet(1) = 1 / std::sqrt(2.0);
  singlet(2) = -1 / std::sqrt(2.0);
  const Matrix expect = pt.matrix() + 0.5 * singlet * singlet.adjoint();
  CHECK(max_abs(project_psd(pt).matrix() - expect) < 1e-14);

  for (int trial = 0; trial < 50; ++trial) {
    const HermitianOp x(random_hermitian(4, rng));
    const double dist = (x.matrix() - project_psd(x).matrix()).norm();
    const Matrix z = random_density(4, rng) * (trial % 5 + 0.1);
    CHECK(dist <= (x.matrix() - z).norm() + 1e-12);
  }
}

TEST_CASE("project_ppt_cone examples") {
  // Isotropic states with p <= 1/d are already PPT.
  for (int d = 2; d <= 3; ++d) {
    const double p = 1.0 / d;
    const Matrix iso = p * phi_matrix(d) + (1 - p) * (Matrix::Identity(d * d, d * d) - phi_matrix(d)) / (d * d - 1.0);
    const HermitianOp x(iso, {d, d}, {1});
    CHECK(max_abs(project_ppt_cone(x).matrix() - iso) < 1e-12);
  }
  const auto id = HermitianOp::identity({2, 2}, {1});
  CHECK(max_abs(project_ppt_cone(id).matrix() - id.matrix()) == 0.0);

  const auto out = project_ppt_cone(phi_op(2));
  CHECK(max_abs(out.matrix() - phi_matrix(2)) > 1e-3);
  CHECK(lambda_min(out) >= -1e-9);
  CHECK(lambda_min(partial_transpose(out)) >= -1e-9);

  CHECK_THROWS_AS(project_ppt_cone(HermitianOp::identity({2, 2})), StructuralError);
}

TEST_CASE("project_ppt_cone outputs satisfy both constraints on random inputs") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const int db = 2 + trial % 2;
    const HermitianOp x(random_hermitian(2 * db, rng), {2, db}, {1});
    const double tol = 1e-9;
    const auto out = project_ppt_cone(x, tol, 20000);
    CHECK(lambda_min(out) >= -tol);
    CHECK(lambda_min(partial_transpose(out)) >= -tol);
  }
}

TEST_CASE("project_ppt_cone reports the cap as a solver error") {
  std::mt19937_64 rng(20);
  const HermitianOp x(random_hermitian(9, rng), {3, 3}, {1});
  CHECK_THROWS_AS(project_ppt_cone(x, 1e-14, 2), SolverError);
}

TEST_CASE("hermitization tolerance and layout checks") {
  Matrix m = Matrix::Identity(2, 2);
  m(0, 1) = Complex(0, 1e-3);
  CHECK_THROWS_AS(HermitianOp{m}, DomainError);
  m(0, 1) = Complex(0, 1e-14);
  const HermitianOp h(m);
  CHECK(max_abs(h.matrix() - h.matrix().adjoint()) == 0.0);
  CHECK_THROWS_AS(HermitianOp(Matrix::Identity(4, 4), {2, 3}), StructuralError);
  CHECK_THROWS_AS(HermitianOp(Matrix::Identity(4, 4), {2, 2}, {2}), StructuralError);
  CHECK_THROWS_AS(HermitianOp::identity({64, 65}), ResourceError);
}

TEST_CASE("density operator validation") {
  CHECK_NOTHROW(DensityOp(0.5 * HermitianOp::identity({2})));
  CHECK_THROWS_AS(DensityOp(HermitianOp::identity({2})), DomainError);
  RealVector v(2);
  v << 1.1, -0.1;
  CHECK_THROWS_AS(DensityOp(HermitianOp::diagonal(v)), DomainError);
}

TEST_CASE("matrix JSON round trip") {
  std::mt19937_64 rng(21);
  const HermitianOp x(random_hermitian(6, rng), {2, 3}, {1});
  const auto back = operator_from_json(operator_to_json(x));
  CHECK(back.dims() == x.dims());
  CHECK(back.b_indices() == x.b_indices());
  CHECK(max_abs(back.matrix() - x.matrix()) == 0.0);
  CHECK_THROWS_AS(operator_from_json(nlohmann::json{{"dims", {2}}}), StructuralError);
}
