#include <doctest.h>

#include <cmath>

#include "jborg/herglotz.hpp"
#include "jborg/instances.hpp"

using namespace jborg;

TEST_CASE("boundary values of the free diagonal Green's matrix") {
  auto c = free_jacobi(1);
  WeylOptions opt;
  opt.fast_tail = true;
  MatrixEvaluator g = [&](cplx z) {
    MPair p = weyl_pair(c, z, 0, opt);
    return small_inverse(p.minus - p.plus);
  };
  // g(0 + i0) = i/2
  Mat v0 = boundary_value(g, 0.0, 1e-7);
  CHECK(std::abs(v0(0, 0) - cplx(0.0, 0.5)) < 1e-6);
  // g(3) = -1/sqrt(5), g(-3) = +1/sqrt(5)
  Mat v3 = boundary_value(g, 3.0, 1e-7);
  CHECK(std::abs(v3(0, 0) + 1.0 / std::sqrt(5.0)) < 1e-6);
  Mat vm3 = boundary_value(g, -3.0, 1e-7);
  CHECK(std::abs(vm3(0, 0) - 1.0 / std::sqrt(5.0)) < 1e-6);
}

TEST_CASE("xi of the free operator: 1/2 inside, 0 below, 1 above") {
  auto c = free_jacobi(1);
  WeylOptions opt;
  opt.fast_tail = true;
  CHECK(std::abs(xi_point(c, 0, 0.0, 1e-6, XiTarget::XiOfG, Side::Plus,
                          opt)(0, 0) -
                 0.5) < 1e-5);
  CHECK(std::abs(xi_point(c, 0, 3.0, 1e-6, XiTarget::XiOfG, Side::Plus,
                          opt)(0, 0) -
                 1.0) < 1e-5);
  CHECK(std::abs(xi_point(c, 0, -3.0, 1e-6, XiTarget::XiOfG, Side::Plus,
                          opt)(0, 0)) < 1e-5);
}

TEST_CASE("Borg m=2 xi plateau at I/2 on the middle 80%") {
  auto c = borg_jacobi(-1.0, 3.0, 2);
  WeylOptions opt;
  opt.fast_tail = true;
  XiGrid g = xi_grid(c, 0, -1.0 + 0.4, 3.0 - 0.4, 101, 1e-3,
                     XiTarget::XiOfG, Side::Plus, opt);
  for (const Mat& v : g.values)
    CHECK(opnorm(v - 0.5 * Mat::Identity(2, 2)) < 2e-2);
}

TEST_CASE("XiPM of the free operator: arg of +-M_pm") {
  auto c = free_jacobi(1);
  WeylOptions opt;
  opt.fast_tail = true;
  // M_+(0 + i0) = i, so Xi_+ = arg(i)/pi = 1/2
  Mat xp = xi_point(c, 0, 0.0, 1e-6, XiTarget::XiPM, Side::Plus, opt);
  CHECK(std::abs(xp(0, 0) - 0.5) < 1e-5);
  Mat xm = xi_point(c, 0, 0.0, 1e-6, XiTarget::XiPM, Side::Minus, opt);
  CHECK(std::abs(xm(0, 0) - 0.5) < 1e-5);
}

TEST_CASE("xi grids stay between 0 and I and Hermitian") {
  auto c = random_jacobi(2, 83, 0.3);
  WeylOptions opt;
  opt.fast_tail = true;
  for (XiTarget target : {XiTarget::XiOfG, XiTarget::XiPM}) {
    XiGrid g = xi_grid(c, 0, -3.5, 3.5, 41, 1e-3, target, Side::Plus, opt);
    for (const Mat& v : g.values) {
      CHECK(rel_herm_defect(v) < 1e-10);
      auto ev = herm_eigenvalues(v);
      CHECK(ev.minCoeff() > -1e-6);
      CHECK(ev.maxCoeff() < 1.0 + 1e-6);
    }
  }
  XiGrid up = xi_grid(c, 0, -3.5, 3.5, 21, 1e-3, XiTarget::UpsilonBig,
                      Side::Plus, opt);
  for (const Mat& v : up.values) {
    CHECK(v.rows() == 4);
    auto ev = herm_eigenvalues(v);
    CHECK(ev.minCoeff() > -1e-6);
    CHECK(ev.maxCoeff() < 1.0 + 1e-6);
  }
}

TEST_CASE("plateau law outside the numerical spectrum") {
  auto c = random_jacobi(2, 89, 0.25);
  auto ev = spectrum_estimate(truncate_jacobi(c, -1000, 999));
  double em = ev.front(), ep = ev.back();
  WeylOptions opt;
  opt.fast_tail = true;
  const double eps = 1e-3;
  const Mat I2 = Mat::Identity(2, 2);
  for (double off : {0.05, 0.2, 0.5}) {
    Mat below = xi_point(c, 0, em - 5 * eps - off, eps, XiTarget::XiOfG,
                         Side::Plus, opt);
    Mat above = xi_point(c, 0, ep + 5 * eps + off, eps, XiTarget::XiOfG,
                         Side::Plus, opt);
    CHECK(opnorm(below) < 5e-2);
    CHECK(opnorm(above - I2) < 5e-2);
  }
}

TEST_CASE("greens_full route equals (M- - M+)^{-1} at lambda + i eps") {
  auto c = random_jacobi(2, 97, 0.3);
  const cplx z(0.37, 1e-3);
  Mat g1 = greens_full(c, z, 0, 0);
  MPair p = weyl_pair(c, z, 0);
  CHECK(opnorm(g1 - small_inverse(p.minus - p.plus)) < 1e-9);
}

TEST_CASE("stieltjes measure of the free M_+ recovers the semicircle") {
  auto c = free_jacobi(1);
  WeylOptions opt;
  opt.fast_tail = true;
  MatrixEvaluator mp = [&](cplx z) { return weyl_pair(c, z, 0, opt).plus; };
  MatrixMeasure mu = stieltjes_measure(mp, -3.0, 3.0, 10000, 1e-4);
  CHECK(std::abs(mu.total_mass()(0, 0).real() - 1.0) < 1e-2);
  // density at 0 is sqrt(4)/2/pi = 1/pi
  std::size_t mid = mu.nodes.size() / 2;
  CHECK(std::abs(mu.density[mid](0, 0).real() -
                 std::sqrt(4.0 - mu.nodes[mid] * mu.nodes[mid]) /
                     (2.0 * M_PI)) < 1e-3);
  for (const Mat& w : mu.weights) CHECK(min_eigenvalue(w) > -1e-12);
}

TEST_CASE("Borg measures: dOmega+ = dOmega- = dGamma/2") {
  const double em = -1.0, ep = 3.0;
  auto c = borg_jacobi(em, ep, 2);
  WeylOptions opt;
  opt.fast_tail = true;
  const double eps = 1e-5;
  for (double lam : {0.1, 1.0, 2.3}) {
    MPair p = weyl_pair(c, cplx(lam, eps), 0, opt);
    Mat dp = (p.plus - p.plus.adjoint()) / cplx(0, 2) / M_PI;
    Mat dm = (Mat(-p.minus) - Mat(-p.minus).adjoint()) / cplx(0, 2) / M_PI;
    double expect = 0.5 * gamma_density(lam, em, ep);
    CHECK(opnorm(dp - expect * Mat::Identity(2, 2)) < 1e-3);
    CHECK(opnorm(dm - expect * Mat::Identity(2, 2)) < 1e-3);
  }
}

TEST_CASE("constant real evaluator has zero measure") {
  Mat h(2, 2);
  h << 1.0, cplx(0, 0.5), cplx(0, -0.5), -2.0;
  MatrixEvaluator f = [&](cplx) { return h; };
  MatrixMeasure mu = stieltjes_measure(f, -1.0, 1.0, 64, 1e-3);
  CHECK(opnorm(mu.total_mass()) < 1e-14);
}

TEST_CASE("reflectionless verdicts: Borg true, free true, perturbed false") {
  WeylOptions opt;
  opt.fast_tail = true;
  auto borg = borg_jacobi(-1.0, 3.0, 2);
  auto rep = reflectionless_check(borg, -1.0, 3.0, {-1, 0, 2}, 1e-3, 2e-2,
                                  101, opt);
  CHECK(rep.verdict);

  auto fr = free_jacobi(1);
  auto rep_free =
      reflectionless_check(fr, -2.0, 2.0, {0}, 1e-3, 2e-2, 101, opt);
  CHECK(rep_free.verdict);

  // gap-opening perturbation of the Borg coefficients
  auto pert = [&] {
    Rng rng(7);
    std::vector<Mat> av, bv;
    for (int k = -40; k <= 40; ++k) {
      Mat a = Mat::Identity(2, 2);
      Mat b = Mat::Identity(2, 2);
      if (k % 2 == 0) b *= 1.6;
      else b *= 0.4;
      av.push_back(a);
      bv.push_back(b + 0.05 * hermitize(rng.hermitian(2, 1.0)));
    }
    return validate_jacobi(MatrixSeq(-40, std::move(av)),
                           MatrixSeq(-40, std::move(bv)));
  }();
  auto evp = spectrum_estimate(truncate_jacobi(pert, -500, 499));
  auto rep_bad = reflectionless_check(pert, evp.front(), evp.back(), {0},
                                      1e-3, 2e-2, 101, opt);
  CHECK_FALSE(rep_bad.verdict);
}

TEST_CASE("strong reflectionless diagnostic is small for the Borg operator") {
  auto c = borg_jacobi(-1.0, 3.0, 2);
  WeylOptions opt;
  opt.fast_tail = true;
  CHECK(strong_reflectionless_gap(c, 1.0, 0, 1e-5, opt) < 1e-3);
}

TEST_CASE("borg reference closed forms") {
  const double em = -2.0, ep = 2.0;
  const cplx z(0, 2);
  Mat g = borg_reference_g(z, em, ep, 1);
  CHECK(std::abs(g(0, 0) - cplx(0, 1.0 / (2.0 * std::sqrt(2.0)))) < 1e-14);

  // large-z asymptotics: -z g -> I
  Mat far = borg_reference_g(cplx(0, 1e6), em, ep, 2);
  CHECK(opnorm(cplx(0, -1e6) * far - Mat::Identity(2, 2)) < 1e-5);

  // M+ + M- = (-z + (E-+E+)/2) I exactly
  for (cplx w : {cplx(0.3, 1.0), cplx(-2.5, 0.2)}) {
    Mat sum = borg_reference_M(w, -1.0, 3.0, Side::Plus, 2) +
              borg_reference_M(w, -1.0, 3.0, Side::Minus, 2);
    CHECK(opnorm(sum - (-w + 1.0) * Mat::Identity(2, 2)) < 1e-13);
  }

  CHECK_THROWS_AS(borg_reference_g(cplx(0.5, 0.0), -1.0, 3.0, 1), OnCut);
  CHECK(gamma_density(1.0, -1.0, 3.0) ==
        doctest::Approx(std::sqrt(2.0 * 2.0) / M_PI));
  CHECK(gamma_density(-1.5, -1.0, 3.0) == 0.0);
}

TEST_CASE("matrix log rejects arguments with spectrum on the cut") {
  Mat neg(1, 1);
  neg << -1.0;
  CHECK_THROWS_AS(principal_matrix_log(neg), LogBranchFailure);
  Mat ok(1, 1);
  ok << cplx(-1.0, 1e-3);
  CHECK(principal_matrix_log(ok).allFinite());
}

TEST_CASE("grid coarseness guards") {
  MatrixEvaluator f = [](cplx) { return Mat::Identity(1, 1); };
  CHECK_THROWS_AS(stieltjes_measure(f, -1.0, 1.0, 8, 1e-3), GridTooCoarse);
  auto c = free_jacobi(1);
  CHECK_THROWS_AS(
      xi_grid(c, 0, -1.0, 1.0, 1, 1e-3, XiTarget::XiOfG, Side::Plus),
      GridTooCoarse);
}

TEST_CASE("Richardson extrapolation sharpens the Borg plateau") {
  auto c = borg_jacobi(-1.0, 3.0, 2);
  WeylOptions opt;
  opt.fast_tail = true;
  const Mat half = 0.5 * Mat::Identity(2, 2);
  XiGrid plain = xi_grid(c, 0, -0.2, 2.2, 41, 1e-3, XiTarget::XiOfG,
                         Side::Plus, opt);
  XiGrid extra = xi_grid_extrapolated(c, 0, -0.2, 2.2, 41, 1e-3,
                                      XiTarget::XiOfG, Side::Plus, opt);
  double dev_plain = 0.0, dev_extra = 0.0;
  for (std::size_t i = 0; i < plain.values.size(); ++i) {
    dev_plain = std::max(dev_plain, opnorm(plain.values[i] - half));
    dev_extra = std::max(dev_extra, opnorm(extra.values[i] - half));
  }
  CHECK(dev_extra < dev_plain);
  CHECK(dev_extra < 1e-5);
}

TEST_CASE("trimmed essential-spectrum estimate stays inside the band") {
  auto c = borg_jacobi(-1.0, 3.0, 1);
  auto [em, ep] = essential_spectrum_estimate(c);
  CHECK(em > -1.0);
  CHECK(em < -0.9);
  CHECK(ep < 3.0);
  CHECK(ep > 2.9);
}

TEST_CASE("forward Borg check: computed g and M match the references") {
  const double em = -1.0, ep = 3.0;
  auto c = borg_jacobi(em, ep, 2);
  WeylOptions opt;
  for (int k : {-2, 0, 3}) {
    for (cplx z : {cplx(0.5, 1.0), cplx(-1.5, 1.4)}) {
      Mat g = greens_full(c, z, k, k, opt);
      CHECK(opnorm(g - borg_reference_g(z, em, ep, 2)) < 1e-8);
      MPair p = weyl_pair(c, z, k, opt);
      CHECK(opnorm(p.plus - borg_reference_M(z, em, ep, Side::Plus, 2)) <
            1e-8);
      CHECK(opnorm(p.minus - borg_reference_M(z, em, ep, Side::Minus, 2)) <
            1e-8);
    }
  }
}
