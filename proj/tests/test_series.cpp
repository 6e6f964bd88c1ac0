#include <doctest.h>

#include <cmath>

#include "jborg/herglotz.hpp"
#include "jborg/instances.hpp"
#include "jborg/series.hpp"

using namespace jborg;

namespace {

// Moment oracle: the (k,k)-block of powers of a truncation wide enough that
// finite propagation speed makes the block exact.
Mat moment_full_line(const JacobiCoefficients& c, int k, int power) {
  int w = power + 2;
  auto t = truncate_jacobi(c, k - w, k + w);
  Mat h = t.dense();
  const int m = c.dim();
  Mat p = Mat::Identity(h.rows(), h.cols());
  for (int i = 0; i < power; ++i) p = h * p;
  return p.block((k - t.k_lo()) * m, (k - t.k_lo()) * m, m, m);
}

Mat moment_half_line(const JacobiCoefficients& c, int k, Side side,
                     int power) {
  int w = power + 2;
  auto t = side == Side::Plus ? truncate_jacobi(c, k, k + w)
                              : truncate_jacobi(c, k - w, k);
  Mat h = t.dense();
  const int m = c.dim();
  int blk = side == Side::Plus ? 0 : (t.sites() - 1) * m;
  Mat p = Mat::Identity(h.rows(), h.cols());
  for (int i = 0; i < power; ++i) p = h * p;
  return p.block(blk, blk, m, m);
}

MatrixSeries random_series(Rng& rng, int m, int lead, int order) {
  MatrixSeries s(m, lead, order);
  for (int n = lead; n <= order; ++n) s.coeff(n) = rng.hermitian(m, 1.0);
  // invertible leading coefficient
  s.coeff(lead) += 3.0 * Mat::Identity(m, m);
  return s;
}

}  // namespace

TEST_CASE("series arithmetic: inverse and product rule") {
  Rng rng(5);
  for (int m : {1, 2}) {
    MatrixSeries s = random_series(rng, m, 1, 9);
    MatrixSeries inv = s.inverse();
    MatrixSeries prod = s * inv;
    CHECK(prod.lead() == 0);
    CHECK((prod.coeff(0) - Mat::Identity(m, m)).norm() < 1e-12);
    for (int n = 1; n <= prod.order(); ++n)
      CHECK(prod.coeff(n).norm() < 1e-12);

    MatrixSeries t = random_series(rng, m, 1, 9);
    MatrixSeries lhs = (s * t).derivative();
    MatrixSeries rhs = s.derivative() * t + s * t.derivative();
    for (int n = lhs.lead(); n <= std::min(lhs.order(), rhs.order()); ++n)
      CHECK((lhs.coeff(n) - rhs.coeff(n)).norm() < 1e-12);
  }
}

TEST_CASE("m-series leading coefficients and the mirrored third order") {
  auto c = random_jacobi(2, 19, 0.4);
  const int k = 1;
  auto sp = m_series(c, k, Side::Plus, 4);
  CHECK((sp.coeff(1) + Mat::Identity(2, 2)).norm() == 0.0);
  CHECK((sp.coeff(2) + c.b().at(k)).norm() < 1e-14);
  Mat expect3p = -(c.b().at(k) * c.b().at(k) + c.a().at(k) * c.a().at(k));
  CHECK((sp.coeff(3) - expect3p).norm() < 1e-13);

  auto sm = m_series(c, k, Side::Minus, 4);
  Mat expect3m =
      -(c.b().at(k) * c.b().at(k) + c.a().at(k - 1) * c.a().at(k - 1));
  CHECK((sm.coeff(3) - expect3m).norm() < 1e-13);
}

TEST_CASE("moment oracle pins m-series and g-series through order 8") {
  for (int m : {1, 2}) {
    auto c = random_jacobi(m, 400 + m, 0.4);
    const int k = 0, J = 8;
    auto sp = m_series(c, k, Side::Plus, J);
    auto sm = m_series(c, k, Side::Minus, J);
    auto gr = g_series(c, k, J);
    for (int j = 1; j <= J; ++j) {
      CHECK((sp.coeff(j) + moment_half_line(c, k, Side::Plus, j - 1)).norm() <
            1e-12);
      CHECK((sm.coeff(j) + moment_half_line(c, k, Side::Minus, j - 1)).norm() <
            1e-12);
      CHECK((gr.coeff(j) + moment_full_line(c, k, j - 1)).norm() < 1e-11);
    }
  }
}

TEST_CASE("M-series constants match the stated recursions start") {
  auto c = random_jacobi(2, 21, 0.4);
  const int k = 0;
  auto mp = M_series(c, k, Side::Plus, 3);
  const Mat &a = c.a().at(k), &bp = c.b().at(k + 1);
  CHECK((mp.coeff(1) + a * a).norm() < 1e-14);
  CHECK((mp.coeff(2) + a * bp * a).norm() < 1e-14);

  auto mm = M_series(c, k, Side::Minus, 3);
  const Mat &am = c.a().at(k - 1), &bm = c.b().at(k - 1);
  CHECK((mm.coeff(-1) + Mat::Identity(2, 2)).norm() == 0.0);
  CHECK((mm.coeff(0) - c.b().at(k)).norm() == 0.0);
  CHECK((mm.coeff(1) - am * am).norm() < 1e-14);
  CHECK((mm.coeff(2) - am * bm * am).norm() < 1e-14);
}

TEST_CASE("M-series consistency with the m-series route") {
  auto c = random_jacobi(2, 27, 0.35);
  const int k = 1, J = 7;
  // M_+ = -m_+^{-1} - z + B(k)
  auto msp = m_series(c, k, Side::Plus, J);
  MatrixSeries route = -msp.inverse();
  route.coeff(-1) -= Mat::Identity(2, 2);
  route.coeff(0) += c.b().at(k);
  auto mp = M_series(c, k, Side::Plus, J);
  CHECK(route.coeff(-1).norm() < 1e-12);  // -z cancels against -m^{-1}
  CHECK(route.coeff(0).norm() < 1e-12);
  for (int j = 1; j <= std::min(J, route.order()); ++j)
    CHECK((route.coeff(j) - mp.coeff(j)).norm() < 1e-11);

  // M_- = m_-^{-1}
  auto msm = m_series(c, k, Side::Minus, J);
  MatrixSeries mm_route = msm.inverse();
  auto mm = M_series(c, k, Side::Minus, J);
  for (int j = -1; j <= std::min(mm_route.order(), J); ++j)
    CHECK((mm_route.coeff(j) - mm.coeff(j)).norm() < 1e-11);
}

TEST_CASE("g-series r1..r4 reproduce the printed expansion") {
  auto c = random_jacobi(2, 29, 0.4);
  const int k = 0;
  auto g = g_series(c, k, 4);
  const Mat I2 = Mat::Identity(2, 2);
  const Mat &a = c.a().at(k), &am = c.a().at(k - 1), &b = c.b().at(k);
  const Mat &bp = c.b().at(k + 1), &bm = c.b().at(k - 1);
  CHECK((g.coeff(1) + I2).norm() < 1e-13);
  CHECK((g.coeff(2) + b).norm() < 1e-13);
  CHECK((g.coeff(3) + (am * am + a * a + b * b)).norm() < 1e-13);
  Mat r4 = -(b * b * b + am * bm * am + a * bp * a + b * a * a + b * am * am +
             a * a * b + am * am * b);
  CHECK((g.coeff(4) - r4).norm() < 1e-12);
}

TEST_CASE("s-series constants s1, s2, s3") {
  for (int m : {1, 2, 3}) {
    auto c = random_jacobi(m, 500 + m, 0.4);
    const int k = 2;
    auto s = s_series(c, k, 3);
    const Mat &a = c.a().at(k), &am = c.a().at(k - 1), &b = c.b().at(k);
    CHECK((s.coeff(1) - Mat::Identity(m, m)).norm() == 0.0);
    CHECK((s.coeff(2) - b).norm() < 1e-13);
    CHECK((s.coeff(3) - (2.0 * am * am + 2.0 * a * a + b * b)).norm() <
          1e-12);
  }
}

TEST_CASE("series order guards: J >= 1 and the J = 16 cap") {
  auto c = random_jacobi(1, 600, 0.3);
  CHECK_THROWS_AS(m_series(c, 0, Side::Plus, 0), DimensionMismatch);
  CHECK_THROWS_AS(g_series(c, 0, 17), DimensionMismatch);
  CHECK(s_series(c, 0, 16).order() == 16);
}

TEST_CASE("recursions demand window coverage under Forbidden extension") {
  auto c = validate_jacobi(
      MatrixSeq(0, {Mat::Identity(1, 1), Mat::Identity(1, 1)},
                Extension::Forbidden),
      MatrixSeq(0, {Mat::Zero(1, 1), Mat::Zero(1, 1)},
                Extension::Forbidden));
  CHECK_THROWS_AS(m_series(c, 0, Side::Plus, 6), WindowTooSmall);
}

TEST_CASE("trace_rhs: j=1 gives the identity regardless of Xi") {
  XiGrid xi;
  xi.lambdas.resize(33);
  xi.values.resize(33);
  Rng rng(3);
  for (int i = 0; i < 33; ++i) {
    xi.lambdas[i] = -1.0 + 2.0 * i / 32.0;
    xi.values[i] = hermitize(rng.hermitian(2, 1.0));
  }
  Mat r = trace_rhs(1, xi, -1.0, 1.0);
  CHECK((r - Mat::Identity(2, 2)).norm() < 1e-14);
  XiGrid coarse;
  coarse.lambdas.resize(8);
  coarse.values.assign(8, Mat::Zero(2, 2));
  CHECK_THROWS_AS(trace_rhs(2, coarse, -1.0, 1.0), GridTooCoarse);
}

TEST_CASE("trace_rhs: reflectionless Xi = I/2 gives (E-+E+)/2 at j=2") {
  const double em = -1.5, ep = 2.5;
  XiGrid xi;
  const int n = 101;
  xi.lambdas.resize(n);
  xi.values.assign(n, 0.5 * Mat::Identity(2, 2));
  for (int i = 0; i < n; ++i)
    xi.lambdas[i] = em + (ep - em) * i / (n - 1.0);
  Mat r = trace_rhs(2, xi, em, ep);
  CHECK((r - 0.5 * (em + ep) * Mat::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("free end-to-end trace check at j=2") {
  auto c = free_jacobi(1);
  WeylOptions opt;
  opt.fast_tail = true;
  XiGrid xi = xi_grid(c, 0, -2.2, 2.2, 2001, 1e-3, XiTarget::XiOfG,
                      Side::Plus, opt);
  Mat r = trace_rhs(2, xi, -2.2, 2.2);
  CHECK(std::abs(r(0, 0)) < 2e-2);  // s_2 = b = 0
}
