#include <doctest.h>

#include <cmath>

#include "jborg/instances.hpp"
#include "jborg/jacobi.hpp"
#include "jborg/weyl.hpp"

using namespace jborg;

TEST_CASE("matrix_seq extension policies") {
  Mat a = Mat::Identity(2, 2), b = 2.0 * Mat::Identity(2, 2);
  MatrixSeq tail(0, {a, b}, Extension::ConstantTail);
  CHECK((tail.at(-5) - a).norm() == 0.0);
  CHECK((tail.at(7) - b).norm() == 0.0);

  MatrixSeq per(0, {a, b, a, b}, Extension::Periodic, 2);
  for (int k = -6; k <= 9; ++k)
    CHECK((per.at(k) - per.at(k + 2)).norm() == 0.0);

  MatrixSeq forb(0, {a, b}, Extension::Forbidden);
  CHECK_THROWS_AS((void)forb.at(2), OutOfWindow);
  CHECK_THROWS_AS(MatrixSeq(0, {a, b, b}, Extension::Periodic, 2),
                  DimensionMismatch);
}

TEST_CASE("validate_jacobi accepts the identity/zero pair with C = 1") {
  auto c = free_jacobi(2);
  CHECK(c.dim() == 2);
  CHECK(c.bound() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("validate_jacobi rejects semidefinite A and non-Hermitian B") {
  Mat bad_a(2, 2);
  bad_a << 1, 0, 0, 0;
  MatrixSeq a(0, {bad_a});
  MatrixSeq b(0, {Mat::Zero(2, 2)});
  CHECK_THROWS_AS(validate_jacobi(a, b), NotPositiveDefinite);

  Mat bad_b(2, 2);
  bad_b << 0, 1, 0, 0;
  CHECK_THROWS_AS(
      validate_jacobi(MatrixSeq(0, {Mat::Identity(2, 2)}),
                      MatrixSeq(0, {bad_b})),
      NotHermitian);

  CHECK_THROWS_AS(
      validate_jacobi(MatrixSeq(0, {Mat::Identity(2, 2)}),
                      MatrixSeq(0, {Mat::Zero(3, 3)})),
      DimensionMismatch);
}

TEST_CASE("five-site free truncation has the path-graph spectrum") {
  auto c = free_jacobi(1);
  auto t = truncate_jacobi(c, 0, 4);
  auto ev = spectrum_estimate(t);
  REQUIRE(ev.size() == 5);
  const double r3 = std::sqrt(3.0);
  double expect[5] = {-r3, -1.0, 0.0, 1.0, r3};
  for (int i = 0; i < 5; ++i)
    CHECK(ev[i] == doctest::Approx(expect[i]).epsilon(1e-12));
}

TEST_CASE("single-site truncation equals B(k0)") {
  auto c = random_jacobi(2, 7, 0.3);
  auto t = truncate_jacobi(c, 3, 3);
  CHECK((t.dense() - c.b().at(3)).norm() == 0.0);
  CHECK_THROWS_AS(truncate_jacobi(c, 3, 2), WindowTooSmall);
}

TEST_CASE("random m=2 truncation is Hermitian with one-block bandwidth") {
  auto c = random_jacobi(2, 11, 0.4);
  auto t = truncate_jacobi(c, -4, 5);
  Mat h = t.dense();
  CHECK((h - h.adjoint()).norm() <= 1e-14 * h.norm());
  for (int i = 0; i < t.sites(); ++i)
    for (int j = 0; j < t.sites(); ++j)
      if (std::abs(i - j) > 1)
        CHECK(h.block(i * 2, j * 2, 2, 2).norm() == 0.0);
}

TEST_CASE("wronskian at the reference site is forced to A(k0)") {
  auto c = random_jacobi(2, 13, 0.3);
  const cplx z(0.4, 0.9);
  const int k0 = 0;
  auto fz = fundamental_solutions(c, z, k0, -2, 4);
  auto fzb = fundamental_solutions(c, std::conj(z), k0, -2, 4);
  MatrixSeq theta_conj = fzb.theta.map([](const Mat& x) { return Mat(x.adjoint()); });
  Mat w = wronskian(theta_conj, fz.phi, c.a(), k0);
  CHECK((w - c.a().at(k0)).norm() <= 1e-12);

  // definition check: W(f,f)(k) = f(k) A f(k+1) - f(k+1) A f(k)
  Mat wff = wronskian(fz.phi, fz.phi, c.a(), 1);
  Mat direct = fz.phi.at(1) * c.a().at(1) * fz.phi.at(2) -
               fz.phi.at(2) * c.a().at(1) * fz.phi.at(1);
  CHECK((wff - direct).norm() == 0.0);
}

TEST_CASE("wronskian of two solutions is independent of the site") {
  // constancy holds to the local term scale: the Wronskian is a cancellation
  // of two products of exponentially growing solutions
  auto c = random_jacobi(2, 17, 0.3, -60, 60);
  for (cplx z : {cplx(0.2, 0.7), cplx(-0.5, 0.1)}) {
    auto fz = fundamental_solutions(c, z, 0, -51, 52);
    auto fzb = fundamental_solutions(c, std::conj(z), 0, -51, 52);
    MatrixSeq theta_conj =
        fzb.theta.map([](const Mat& x) { return Mat(x.adjoint()); });
    Mat w0 = wronskian(theta_conj, fz.phi, c.a(), 0);
    for (int k = -50; k <= 50; ++k) {
      Mat wk = wronskian(theta_conj, fz.phi, c.a(), k);
      double local = theta_conj.at(k).norm() * c.a().at(k).norm() *
                     fz.phi.at(k + 1).norm();
      CHECK((wk - w0).norm() <= 1e-10 * std::max(1.0, local));
    }
  }
}

TEST_CASE("free spectrum approaches [-2, 2] at 2000 sites") {
  auto c = free_jacobi(1);
  auto ev = spectrum_estimate(truncate_jacobi(c, 0, 1999));
  CHECK(std::abs(ev.front() + 2.0) < 1e-3);
  CHECK(std::abs(ev.back() - 2.0) < 1e-3);
}

TEST_CASE("weakly coupled diagonal operator clusters at its diagonal") {
  int m = 1;
  auto c = validate_jacobi(
      MatrixSeq::constant(1e-6 * Mat::Identity(m, m), 0, 9),
      MatrixSeq::constant(5.0 * Mat::Identity(m, m), 0, 9));
  auto ev = spectrum_estimate(truncate_jacobi(c, 0, 9));
  for (double v : ev) CHECK(std::abs(v - 5.0) < 3e-6);
}

TEST_CASE("banded eigenvalues match a dense eigensolve") {
  for (int m : {1, 2, 3}) {
    auto c = random_jacobi(m, 100 + m, 0.4);
    auto t = truncate_jacobi(c, -3, 4);
    auto banded = spectrum_estimate(t);
    auto dense = herm_eigenvalues(t.dense());
    REQUIRE(static_cast<int>(banded.size()) == dense.size());
    for (std::size_t i = 0; i < banded.size(); ++i)
      CHECK(banded[i] == doctest::Approx(dense(i)).epsilon(1e-11));
  }
}

TEST_CASE("Borg truncation spectrum is contained in [E-, E+]") {
  auto c = borg_jacobi(-1.0, 3.0, 2);
  auto ev = spectrum_estimate(truncate_jacobi(c, 0, 999));
  CHECK(ev.front() >= -1.0 - 1e-8);
  CHECK(ev.back() <= 3.0 + 1e-8);
}
