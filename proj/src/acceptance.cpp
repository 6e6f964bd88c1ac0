#include "jborg/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "jborg/dirac.hpp"
#include "jborg/instances.hpp"
#include "jborg/parallel.hpp"
#include "jborg/quadrature.hpp"
#include "jborg/reconstruct.hpp"
#include "jborg/series.hpp"

namespace jborg {

namespace {

using Clock = std::chrono::steady_clock;

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

double hausdorff(const std::vector<double>& a, const std::vector<double>& b) {
  double h = 0.0;
  std::size_t j = 0;
  for (double x : a) {
    while (j + 1 < b.size() && std::abs(b[j + 1] - x) <= std::abs(b[j] - x))
      ++j;
    h = std::max(h, std::abs(b[j] - x));
  }
  return h;
}

// --- criterion bodies ----------------------------------------------------

CriterionResult c1_moment_oracle(int) {
  CriterionResult r;
  r.id = 1;
  r.name = "moment-oracle exactness (j <= 8, 20 random sets)";
  r.tolerance = 1e-10;
  const int J = 8;
  for (int i = 0; i < 20; ++i) {
    int m = 1 + i % 3;
    auto c = random_jacobi(m, 1000 + i, 0.35);
    const int k = 0;
    auto sp = m_series(c, k, Side::Plus, J);
    auto sm = m_series(c, k, Side::Minus, J);
    auto gr = g_series(c, k, J);
    for (int j = 1; j <= J; ++j) {
      r.max_error = std::max(
          {r.max_error,
           (sp.coeff(j) + moment_half_line(c, k, Side::Plus, j - 1))
               .cwiseAbs()
               .maxCoeff(),
           (sm.coeff(j) + moment_half_line(c, k, Side::Minus, j - 1))
               .cwiseAbs()
               .maxCoeff(),
           (gr.coeff(j) + moment_full_line(c, k, j - 1))
               .cwiseAbs()
               .maxCoeff()});
    }
  }
  r.passed = r.max_error <= r.tolerance;
  return r;
}

CriterionResult c2_series_constants(int) {
  CriterionResult r;
  r.id = 2;
  r.name = "series constants s1..s3 and r1..r4";
  r.tolerance = 1e-12;
  for (int i = 0; i < 6; ++i) {
    int m = 1 + i % 3;
    auto c = random_jacobi(m, 2000 + i, 0.4);
    const int k = i - 3;
    const Mat I = Mat::Identity(m, m);
    const Mat &a = c.a().at(k), &am = c.a().at(k - 1), &b = c.b().at(k);
    const Mat &bp = c.b().at(k + 1), &bm = c.b().at(k - 1);
    auto s = s_series(c, k, 3);
    auto g = g_series(c, k, 4);
    Mat r4 = -(b * b * b + am * bm * am + a * bp * a + b * a * a +
               b * am * am + a * a * b + am * am * b);
    r.max_error = std::max(
        {r.max_error, (s.coeff(1) - I).norm(), (s.coeff(2) - b).norm(),
         (s.coeff(3) - (2.0 * am * am + 2.0 * a * a + b * b)).norm(),
         (g.coeff(1) + I).norm(), (g.coeff(2) + b).norm(),
         (g.coeff(3) + (am * am + a * a + b * b)).norm(),
         (g.coeff(4) - r4).norm()});
  }
  r.passed = r.max_error <= r.tolerance;
  return r;
}

CriterionResult c3_greens_brute_force(int) {
  CriterionResult r;
  r.id = 3;
  r.name = "Green's matrix vs 400-site dense inverse";
  r.tolerance = 1e-6;
  auto c = random_periodic_jacobi(2, 3000, 0.3, 5);
  WeylOptions opt;
  const int n = 400, lo = -200, m = 2;
  auto t = truncate_jacobi(c, lo, lo + n - 1);
  for (cplx z : {cplx(0.7, 0.5), cplx(-0.4, 0.9), cplx(1.2, -0.6)}) {
    Mat h = t.dense();
    h.diagonal().array() -= z;
    Eigen::PartialPivLU<Mat> lu(h);
    for (int l = -2; l <= 2; ++l) {
      Mat rhs = Mat::Zero(n * m, m);
      rhs.block((l - lo) * m, 0, m, m) = Mat::Identity(m, m);
      Mat col = lu.solve(rhs);
      for (int k = l - 5; k <= l + 5; ++k) {
        Mat g = greens_full(c, z, k, l, opt);
        r.max_error = std::max(
            r.max_error, opnorm(g - col.block((k - lo) * m, 0, m, m)));
      }
    }
  }
  r.passed = r.max_error <= r.tolerance;
  return r;
}

CriterionResult c4_borg_jacobi_forward(int workers) {
  CriterionResult r;
  r.id = 4;
  r.name = "Jacobi Borg forward verification (E=[-1,3], m=2)";
  const double em = -1.0, ep = 3.0;
  const int m = 2;
  auto c = borg_jacobi(em, ep, m);
  WeylOptions opt;
  opt.fast_tail = true;

  // (a) 2000-site spectrum containment and endpoint gaps
  auto ev = spectrum_estimate(truncate_jacobi(c, -1000, 999));
  bool contain = ev.front() >= em - 1e-8 && ev.back() <= ep + 1e-8;
  double gaps = std::max(std::abs(ev.front() - em), std::abs(ev.back() - ep));
  bool edges = gaps <= 1e-3;

  // (b), (c) closed forms at 20 points with Im z >= 1, five sites
  Rng rng(44);
  double err_bc = 0.0;
  for (int i = 0; i < 20; ++i) {
    cplx z(rng.uniform(em - 2.0, ep + 2.0), rng.uniform(1.0, 2.5));
    for (int k : {-2, -1, 0, 1, 2}) {
      err_bc = std::max(err_bc, opnorm(greens_full(c, z, k, k, opt) -
                                       borg_reference_g(z, em, ep, m)));
      MPair p = weyl_pair(c, z, k, opt);
      err_bc = std::max(
          {err_bc,
           opnorm(p.plus - borg_reference_M(z, em, ep, Side::Plus, m)),
           opnorm(p.minus - borg_reference_M(z, em, ep, Side::Minus, m))});
    }
  }

  // (d) Xi plateau on the middle 80%
  auto refl = reflectionless_check(c, em, ep, {-2, -1, 0, 1, 2}, 1e-3, 2e-2,
                                   201, opt, workers);
  double xi_dev = 0.0;
  for (double d : refl.max_deviation) xi_dev = std::max(xi_dev, d);

  r.max_error = std::max({gaps, err_bc, xi_dev});
  r.tolerance = 2e-2;  // binding tolerance of part (d); parts use their own
  r.passed = contain && edges && err_bc <= 1e-8 && refl.verdict;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "containment=%d gaps=%.2e closed-form err=%.2e xi dev=%.2e",
                contain ? 1 : 0, gaps, err_bc, xi_dev);
  r.detail = buf;
  return r;
}

CriterionResult c5_trace_formula(int workers) {
  CriterionResult r;
  r.id = 5;
  r.name = "trace formulas j=2,3 with eps-monotonicity";
  auto c = random_jacobi(2, 5000, 0.3);
  WeylOptions opt;
  opt.fast_tail = true;
  auto ev = spectrum_estimate(truncate_jacobi(c, -1000, 999));
  double pad = 1e-6 * (ev.back() - ev.front());
  double em = ev.front() - pad, ep = ev.back() + pad;
  const int k = 0;
  auto s = s_series(c, k, 3);
  double e2[3], e3[3];
  const double epss[3] = {4e-3, 2e-3, 1e-3};
  for (int i = 0; i < 3; ++i) {
    XiGrid g = xi_grid(c, k, em, ep, 10001, epss[i], XiTarget::XiOfG,
                       Side::Plus, opt, workers);
    e2[i] = opnorm(trace_rhs(2, g, em, ep) - s.coeff(2));
    e3[i] = opnorm(trace_rhs(3, g, em, ep) - s.coeff(3));
  }
  bool mono =
      e2[0] > e2[1] && e2[1] > e2[2] && e3[0] > e3[1] && e3[1] > e3[2];
  r.max_error = std::max(e2[2] / 2e-2, e3[2] / 5e-2);  // scaled to bounds
  r.tolerance = 1.0;
  r.passed = e2[2] <= 2e-2 && e3[2] <= 5e-2 && mono;
  char buf[200];
  std::snprintf(
      buf, sizeof(buf),
      "e2: %.2e>%.2e>%.2e (tol 2e-2); e3: %.2e>%.2e>%.2e (tol 5e-2)", e2[0],
      e2[1], e2[2], e3[0], e3[1], e3[2]);
  r.detail = buf;
  return r;
}

CriterionResult c6_reconstruction(int) {
  CriterionResult r;
  r.id = 6;
  r.name = "reconstruction round trips and Borg measure";
  r.tolerance = 1e-6;  // binding tolerance of the Borg part
  auto c = random_jacobi(2, 6000, 0.35);
  const int k0 = 0;
  double rt = 0.0;
  for (Side side : {Side::Plus, Side::Minus}) {
    auto mu = spectral_measure_halfline(c, k0, side, 12);
    auto sys = block_lanczos(mu, 6);
    auto rec = map_to_lattice(sys, k0, side);
    for (int k = 0; k < 5; ++k) {
      int sb = side == Side::Plus ? k0 + k : k0 - k;
      int sa = side == Side::Plus ? k0 + k : k0 - k - 1;
      rt = std::max({rt, opnorm(rec.b.at(sb) - c.b().at(sb)),
                     opnorm(rec.a.at(sa) - c.a().at(sa))});
    }
  }
  bool rt_ok = rt <= 1e-8;

  // normalized dGamma/2 on Gauss-Legendre nodes recovers the constants
  const double em = -1.0, ep = 3.0;
  auto [x, w] = gauss_legendre(10000, em, ep);
  const double rad = 0.5 * (ep - em);
  MatrixMeasure mu;
  mu.normalized = true;
  for (int i = 0; i < 10000; ++i) {
    mu.nodes.push_back(x[i]);
    mu.weights.push_back(2.0 * gamma_density(x[i], em, ep) / (rad * rad) *
                         w[i] * Mat::Identity(2, 2));
  }
  auto sys = block_lanczos(mu, 6);
  double borg = 0.0;
  const Mat a_expect = 0.25 * (ep - em) * Mat::Identity(2, 2);
  const Mat b_expect = 0.5 * (em + ep) * Mat::Identity(2, 2);
  for (int k = 0; k < 5; ++k)
    borg = std::max({borg, opnorm(sys.recovered_a.at(k) - a_expect),
                     opnorm(sys.recovered_b.at(k) - b_expect)});

  double poly = 0.0;
  for (int k = 0; k <= 4; ++k)
    poly = std::max(poly,
                    poly_solution_identity(c, k0, cplx(0.8, 0.6), k, 12));

  r.max_error = std::max({rt, borg, poly});
  r.passed = rt_ok && borg <= 1e-6 && poly <= 1e-8;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "roundtrip=%.2e (1e-8) borg=%.2e (1e-6) poly=%.2e (1e-8)",
                rt, borg, poly);
  r.detail = buf;
  return r;
}

CriterionResult c7_dirac_structure(int) {
  CriterionResult r;
  r.id = 7;
  r.name = "Dirac factorization, symmetry, susy pairing";
  r.tolerance = 1e-10;
  double exact = 0.0, pairing = 0.0;
  for (int i = 0; i < 3; ++i) {
    auto d = random_dirac(2, 7000 + i, 0.3);
    auto t = truncate_dirac(d, 0, 39);
    Mat e = t.e_dense();
    Mat dd = t.dense();
    Mat d2 = dd * dd;
    const int n = static_cast<int>(e.rows());
    exact = std::max(
        {exact, (d2.topLeftCorner(n, n) - e.adjoint() * e).norm(),
         (d2.bottomRightCorner(n, n) - e * e.adjoint()).norm(),
         d2.topRightCorner(n, n).norm(), d2.bottomLeftCorner(n, n).norm()});
    auto ev = t.spectrum();
    for (std::size_t j = 0; j < ev.size(); ++j)
      exact = std::max(exact, std::abs(ev[j] + ev[ev.size() - 1 - j]));

    Eigen::SelfAdjointEigenSolver<Mat> es(Mat(e.adjoint() * e));
    for (int j = 0; j < es.eigenvalues().size(); ++j) {
      double lam = es.eigenvalues()(j);
      if (lam < 1e-18) continue;
      auto pair =
          susy_eigen_map(e, es.eigenvectors().col(j), 1, std::sqrt(lam));
      pairing = std::max(pairing, pair.residual);
    }
  }
  bool exact_ok = exact <= 1e-12;
  r.max_error = std::max(exact, pairing);
  r.passed = exact_ok && pairing <= 1e-10;
  char buf[120];
  std::snprintf(buf, sizeof(buf),
                "exact identities=%.2e (1e-12) pairing=%.2e", exact, pairing);
  r.detail = buf;
  return r;
}

CriterionResult c8_dirac_cross_route(int) {
  CriterionResult r;
  r.id = 8;
  r.name = "Dirac M^D cross-route agreement (both factorizations)";
  r.tolerance = 1e-8;
  auto d = random_dirac(2, 8000, 0.3);
  WeylOptions opt;
  Rng rng(88);
  for (int i = 0; i < 20; ++i) {
    // keep z^2 safely off the real axis: |Im z^2| = 2 |Re z| |Im z|
    double re = (i % 2 ? 1.0 : -1.0) * rng.uniform(0.4, 1.6);
    double im = (i % 3 ? 1.0 : -1.0) * rng.uniform(0.5, 1.3);
    cplx z(re, im);
    for (Side side : {Side::Plus, Side::Minus}) {
      auto w = dirac_weyl(d, z, 0, side, DiracRoute::H1, opt);
      r.max_error = std::max(r.max_error, w.cross_residual);
    }
  }
  r.passed = r.max_error <= r.tolerance;
  return r;
}

CriterionResult c9_borg_family(int workers) {
  CriterionResult r;
  r.id = 9;
  r.name = "Dirac Borg family: validation, isospectrality";
  r.tolerance = 1e-3;
  const double em = 1.0, ep = 4.0;
  std::vector<std::vector<int>> patterns = {{1, 1}, {1, -1}, {-1, 1},
                                            {-1, -1}};
  std::vector<BorgFamilyMember> mems;
  for (const auto& p : patterns)
    mems.push_back(borg_family(em, ep, p, -250, 249));
  std::vector<std::vector<double>> spectra(4);
  parallel_for(
      4,
      [&](long i) {
        spectra[i] = dirac_spectrum_susy(mems[i].coeffs, -250, 249);
      },
      workers);
  double worst_h = 0.0, worst_band = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j)
      worst_h = std::max({worst_h, hausdorff(spectra[i], spectra[j]),
                          hausdorff(spectra[j], spectra[i])});
    for (double v : spectra[i]) {
      double av = std::abs(v);
      double dist = av < 1.0 ? 1.0 - av : av > 2.0 ? av - 2.0 : 0.0;
      worst_band = std::max(worst_band, dist);
    }
  }
  // E- = 0 collapse is exact
  auto z1 = borg_family(0.0, 4.0, {1, 1});
  auto z2 = borg_family(0.0, 4.0, {-1, 1});
  auto z3 = borg_family(0.0, 4.0, {-1, -1});
  double collapse = std::max((z1.rho_value - z2.rho_value).norm(),
                             (z1.chi_value - z3.chi_value).norm());
  r.max_error = std::max({worst_h, worst_band, collapse});
  r.passed = worst_h <= 1e-3 && worst_band <= 1e-3 && collapse == 0.0;
  char buf[120];
  std::snprintf(buf, sizeof(buf), "hausdorff=%.2e band=%.2e collapse=%.1e",
                worst_h, worst_band, collapse);
  r.detail = buf;
  return r;
}

CriterionResult c10_normal_form(int) {
  CriterionResult r;
  r.id = 10;
  r.name = "normal form: unitary, diagonal positive, isospectral";
  r.tolerance = 1e-10;
  Rng rng(10101);
  const int lo = -8, hi = 8, m = 2;
  double unit = 0.0, spec = 0.0;
  bool diag_pos = true;
  for (int rep = 0; rep < 3; ++rep) {
    std::vector<Mat> rv, cv;
    for (int k = lo; k <= hi; ++k) {
      Mat v = rng.unitary(m);
      Mat d = Mat::Zero(m, m);
      d(0, 0) = rng.uniform(0.5, 1.5) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
      d(1, 1) = rng.uniform(0.5, 1.5) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
      rv.push_back(v * d * v.adjoint());
      cv.push_back(Mat::Identity(m, m) + rng.hermitian(m, 0.3));
    }
    MatrixSeq rs(lo, rv), cs(lo, cv);
    auto nf = normal_form(rs, cs);
    for (const Mat& u : nf.u)
      unit = std::max(unit, opnorm(Mat(u * u.adjoint()) -
                                   Mat::Identity(2 * m, 2 * m)));
    for (int k = lo; k <= hi; ++k) {
      const Mat& rh = nf.rho_hat.at(k);
      for (int i = 0; i < m; ++i) {
        if (rh(i, i).real() <= 0.0) diag_pos = false;
        for (int j = 0; j < m; ++j)
          if (i != j && std::abs(rh(i, j)) > 1e-14) diag_pos = false;
      }
    }
    // aligned windows: interior of the original window
    Mat d0 = dirac_window_dense(rs, cs, lo + 1, hi);
    Mat d1 = dirac_window_dense(nf.rho_hat, nf.chi_hat, lo + 1, hi);
    auto ev0 = herm_eigenvalues(d0);
    auto ev1 = herm_eigenvalues(d1);
    for (int i = 0; i < ev0.size(); ++i)
      spec = std::max(spec, std::abs(ev0(i) - ev1(i)));
  }
  bool unit_ok = unit <= 1e-12;
  r.max_error = std::max({unit, spec});
  r.passed = unit_ok && diag_pos && spec <= 1e-10;
  char buf[120];
  std::snprintf(buf, sizeof(buf), "unitary=%.2e (1e-12) diag+=%d spectra=%.2e",
                unit, diag_pos ? 1 : 0, spec);
  r.detail = buf;
  return r;
}

}  // namespace

CriterionResult run_criterion(int id, int workers, bool verbose) {
  auto t0 = Clock::now();
  CriterionResult r;
  switch (id) {
    case 1: r = c1_moment_oracle(workers); break;
    case 2: r = c2_series_constants(workers); break;
    case 3: r = c3_greens_brute_force(workers); break;
    case 4: r = c4_borg_jacobi_forward(workers); break;
    case 5: r = c5_trace_formula(workers); break;
    case 6: r = c6_reconstruction(workers); break;
    case 7: r = c7_dirac_structure(workers); break;
    case 8: r = c8_dirac_cross_route(workers); break;
    case 9: r = c9_borg_family(workers); break;
    case 10: r = c10_normal_form(workers); break;
    default:
      throw ConfigError("criterion id must be 1..10");
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  // stated runtime limits are part of the criteria
  if (r.id == 1 && r.seconds >= 10.0) r.passed = false;
  if (r.id == 3 && r.seconds >= 30.0) r.passed = false;
  if (verbose) {
    std::printf(
        "%s criterion %2d: %-52s max_err=%.3e tol=%.1e (%.2fs)%s%s\n",
        r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.max_error,
        r.tolerance, r.seconds, r.detail.empty() ? "" : " | ",
        r.detail.c_str());
    std::fflush(stdout);
  }
  return r;
}

std::vector<CriterionResult> run_all_criteria(int workers, bool verbose) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 10; ++id)
    out.push_back(run_criterion(id, workers, verbose));
  return out;
}

}  // namespace jborg
