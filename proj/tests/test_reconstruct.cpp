#include <doctest.h>

#include <cmath>

#include "jborg/instances.hpp"
#include "jborg/quadrature.hpp"
#include "jborg/reconstruct.hpp"

using namespace jborg;

namespace {

// normalized dGamma/2 on [E-, E+]: density 2 s(λ) / (π R²), R = (E+-E-)/2
MatrixMeasure borg_nu_measure(double em, double ep, int m, int nodes) {
  auto [x, w] = gauss_legendre(nodes, em, ep);
  const double r = 0.5 * (ep - em);
  MatrixMeasure mu;
  mu.normalized = true;
  for (int i = 0; i < nodes; ++i) {
    double dens = 2.0 * gamma_density(x[i], em, ep) / (r * r);
    mu.nodes.push_back(x[i]);
    mu.weights.push_back(w[i] * dens * Mat::Identity(m, m));
  }
  return mu;
}

}  // namespace

TEST_CASE("one-site spectral measure is the eigendecomposition of B(k0)") {
  auto c = random_jacobi(2, 101, 0.4);
  MatrixMeasure mu = spectral_measure_halfline(c, 0, Side::Plus, 1);
  CHECK(opnorm(mu.total_mass() - Mat::Identity(2, 2)) < 1e-13);
  Mat rebuilt = Mat::Zero(2, 2);
  for (std::size_t i = 0; i < mu.nodes.size(); ++i)
    rebuilt += mu.nodes[i] * mu.weights[i];
  CHECK(opnorm(rebuilt - c.b().at(0)) < 1e-13);
}

TEST_CASE("two-site free measure: nodes +-1 with weights 1/2") {
  auto c = free_jacobi(1);
  MatrixMeasure mu = spectral_measure_halfline(c, 0, Side::Plus, 2);
  REQUIRE(mu.nodes.size() == 2);
  CHECK(mu.nodes[0] == doctest::Approx(-1.0));
  CHECK(mu.nodes[1] == doctest::Approx(1.0));
  CHECK(mu.weights[0](0, 0).real() == doctest::Approx(0.5));
  CHECK(mu.weights[1](0, 0).real() == doctest::Approx(0.5));

  auto sys = block_lanczos(mu, 1);
  CHECK(std::abs(sys.recovered_b.at(0)(0, 0)) < 1e-14);
  CHECK(std::abs(sys.recovered_a.at(0)(0, 0) - 1.0) < 1e-14);
}

TEST_CASE("total mass is the identity for a random 12-site measure") {
  auto c = random_jacobi(2, 103, 0.35);
  for (Side s : {Side::Plus, Side::Minus}) {
    MatrixMeasure mu = spectral_measure_halfline(c, 1, s, 12);
    CHECK(opnorm(mu.total_mass() - Mat::Identity(2, 2)) < 1e-12);
  }
}

TEST_CASE("orthonormality of the constructed polynomials") {
  auto c = random_jacobi(2, 107, 0.35);
  MatrixMeasure mu = spectral_measure_halfline(c, 0, Side::Plus, 12);
  auto sys = block_lanczos(mu, 6);
  for (int i = 0; i <= 6; ++i)
    for (int j = 0; j <= 6; ++j) {
      Mat ip = Mat::Zero(2, 2);
      for (std::size_t n = 0; n < mu.nodes.size(); ++n)
        ip += sys.eval_poly(i, mu.nodes[n]) * mu.weights[n] *
              sys.eval_poly(j, mu.nodes[n]).adjoint();
      Mat expect = i == j ? Mat(Mat::Identity(2, 2)) : Mat(Mat::Zero(2, 2));
      CHECK(opnorm(ip - expect) < 1e-8);
    }
}

TEST_CASE("12-site round trip recovers the first five sites") {
  auto c = random_jacobi(2, 109, 0.35);
  const int k0 = 0;
  for (Side side : {Side::Plus, Side::Minus}) {
    MatrixMeasure mu = spectral_measure_halfline(c, k0, side, 12);
    auto sys = block_lanczos(mu, 6);
    auto rec = map_to_lattice(sys, k0, side);
    for (int k = 0; k < 5; ++k) {
      int site_b = side == Side::Plus ? k0 + k : k0 - k;
      int site_a = side == Side::Plus ? k0 + k : k0 - k - 1;
      CHECK(opnorm(rec.b.at(site_b) - c.b().at(site_b)) < 1e-8);
      CHECK(opnorm(rec.a.at(site_a) - c.a().at(site_a)) < 1e-8);
    }
  }
}

TEST_CASE("identical measures reconstruct identical operators") {
  auto c = random_jacobi(2, 127, 0.3);
  MatrixMeasure mu = spectral_measure_halfline(c, 0, Side::Plus, 10);
  auto s1 = block_lanczos(mu, 5);
  auto s2 = block_lanczos(mu, 5);
  for (int k = 0; k < 5; ++k) {
    CHECK((s1.recovered_a.at(k) - s2.recovered_a.at(k)).norm() == 0.0);
    CHECK((s1.recovered_b.at(k) - s2.recovered_b.at(k)).norm() == 0.0);
  }
}

TEST_CASE("reconstruction is invariant under merging duplicate nodes") {
  auto c = random_jacobi(1, 131, 0.3);
  MatrixMeasure mu = spectral_measure_halfline(c, 0, Side::Plus, 8);
  MatrixMeasure split;
  split.normalized = true;
  for (std::size_t i = 0; i < mu.nodes.size(); ++i) {
    split.nodes.push_back(mu.nodes[i]);
    split.weights.push_back(0.5 * mu.weights[i]);
    split.nodes.push_back(mu.nodes[i]);
    split.weights.push_back(0.5 * mu.weights[i]);
  }
  auto s1 = block_lanczos(mu, 4);
  auto s2 = block_lanczos(split, 4);
  split.merge_duplicates(1e-14);
  auto s3 = block_lanczos(split, 4);
  for (int k = 0; k < 4; ++k) {
    CHECK(opnorm(s1.recovered_a.at(k) - s2.recovered_a.at(k)) < 1e-12);
    CHECK(opnorm(s1.recovered_a.at(k) - s3.recovered_a.at(k)) < 1e-12);
    CHECK(opnorm(s1.recovered_b.at(k) - s3.recovered_b.at(k)) < 1e-12);
  }
}

TEST_CASE("lanczos breakdown on insufficient support") {
  MatrixMeasure mu;
  mu.normalized = true;
  mu.nodes = {-1.0, 1.0};
  mu.weights = {0.5 * Mat::Identity(1, 1), 0.5 * Mat::Identity(1, 1)};
  CHECK_THROWS_AS(block_lanczos(mu, 2), Breakdown);
}

TEST_CASE("Borg measure reconstruction recovers the constant coefficients") {
  const double em = -1.0, ep = 3.0;
  MatrixMeasure mu = borg_nu_measure(em, ep, 2, 10000);
  CHECK(opnorm(mu.total_mass() - Mat::Identity(2, 2)) < 1e-8);
  auto sys = block_lanczos(mu, 6);
  const Mat a_expect = 0.25 * (ep - em) * Mat::Identity(2, 2);
  const Mat b_expect = 0.5 * (em + ep) * Mat::Identity(2, 2);
  for (int k = 0; k < 5; ++k) {
    CHECK(opnorm(sys.recovered_a.at(k) - a_expect) < 1e-6);
    CHECK(opnorm(sys.recovered_b.at(k) - b_expect) < 1e-6);
  }
}

TEST_CASE("polynomial / fundamental-solution identities") {
  auto c = random_jacobi(2, 137, 0.35);
  CHECK(poly_solution_identity(c, 0, cplx(0.8, 0.6), 0, 12) < 1e-12);
  for (int k : {1, 2, 3, 4})
    CHECK(poly_solution_identity(c, 0, cplx(0.8, 0.6), k, 12) < 1e-8);

  // free scalar: P_{+,2}(2i) = phi(2i, k0+2, k0-1) = z^2 - 1 at z = 2i
  auto cf = free_jacobi(1);
  MatrixMeasure mu = spectral_measure_halfline(cf, 0, Side::Plus, 8);
  auto sys = block_lanczos(mu, 3);
  const cplx z(0, 2);
  CHECK(std::abs(sys.eval_poly(2, z)(0, 0) - (z * z - 1.0)) < 1e-10);
  CHECK(poly_solution_identity(cf, 0, z, 2, 8) < 1e-10);
}
