#include "jborg/dirac.hpp"

#include <algorithm>
#include <cmath>

#include "jborg/parallel.hpp"

namespace jborg {

namespace {

bool is_diagonal_positive(const Mat& x, double tol) {
  double scale = std::max(1.0, x.norm());
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) {
      if (i == j) {
        if (std::abs(x(i, j).imag()) > tol * scale) return false;
        if (x(i, j).real() <= tol * scale) return false;
      } else if (std::abs(x(i, j)) > tol * scale) {
        return false;
      }
    }
  return true;
}

bool is_hermitian_pd(const Mat& x, double tol) {
  if (rel_herm_defect(x) > 1e-10) return false;
  return min_eigenvalue(x) > tol * std::max(1.0, opnorm(x));
}

Mat rho_half_power(const Mat& rho, double p) {
  // rho is diagonal positive by the normal form; entrywise powers
  Mat out = Mat::Zero(rho.rows(), rho.cols());
  for (int i = 0; i < rho.rows(); ++i)
    out(i, i) = std::pow(rho(i, i).real(), p);
  return out;
}

}  // namespace

DiracCoefficients validate_dirac(const MatrixSeq& rho, const MatrixSeq& chi,
                                 double tol) {
  if (rho.dim() != chi.dim())
    throw DimensionMismatch("validate_dirac: rho and chi dimensions differ");
  for (int k = rho.k_lo(); k <= rho.k_hi(); ++k)
    if (!is_diagonal_positive(rho.at(k), tol)) throw NotDiagonalPositive(k);
  for (int k = chi.k_lo(); k <= chi.k_hi(); ++k) {
    const Mat& x = chi.at(k);
    Eigen::JacobiSVD<Mat> svd(x);
    if (svd.singularValues().minCoeff() <=
        tol * std::max(1.0, svd.singularValues().maxCoeff()))
      throw SingularChi(k);
  }
  int lo = std::min(rho.k_lo(), chi.k_lo());
  int hi = std::max(rho.k_hi(), chi.k_hi());
  double bound = 0.0;
  for (int k = lo; k <= hi; ++k) {
    if (!is_hermitian_pd(rho.at(k) * chi.at(k + 1), tol))
      throw PositivityFail(k);
    if (!is_hermitian_pd(chi.at(k) * rho.at(k), tol)) throw PositivityFail(k);
    bound = std::max(bound, opnorm(rho.at(k)) + opnorm(chi.at(k)));
  }
  DiracCoefficients d;
  d.rho_ = rho;
  d.chi_ = chi;
  d.bound_ = bound;
  return d;
}

SusyFactors factorize_susy(const DiracCoefficients& d) {
  const MatrixSeq& rho = d.rho();
  const MatrixSeq& chi = d.chi();
  int lo = std::min(rho.k_lo(), chi.k_lo());
  int hi = std::max(rho.k_hi(), chi.k_hi());
  std::vector<Mat> a1, b1, a2, b2;
  for (int k = lo; k <= hi; ++k) {
    a1.push_back(rho.at(k) * chi.at(k + 1));
    b1.push_back(rho.at(k) * rho.at(k) + chi.at(k).adjoint() * chi.at(k));
    a2.push_back(chi.at(k) * rho.at(k));
    b2.push_back(rho.at(k - 1) * rho.at(k - 1) +
                 chi.at(k) * chi.at(k).adjoint());
  }
  SusyFactors f;
  f.h1 = validate_jacobi(MatrixSeq(lo, std::move(a1)),
                         MatrixSeq(lo, std::move(b1)));
  f.h2 = validate_jacobi(MatrixSeq(lo, std::move(a2)),
                         MatrixSeq(lo, std::move(b2)));
  return f;
}

Mat DiracTruncation::e_dense() const {
  const int m = dim(), n = sites();
  Mat e = Mat::Zero(n * m, n * m);
  for (int i = 0; i < n; ++i) e.block(i * m, i * m, m, m) = chi_[i];
  for (int i = 1; i < n; ++i) e.block(i * m, (i - 1) * m, m, m) = rho_[i - 1];
  return e;
}

Mat DiracTruncation::dense() const {
  const int n = sites() * dim();
  Mat e = e_dense();
  Mat d = Mat::Zero(2 * n, 2 * n);
  d.topRightCorner(n, n) = e.adjoint();
  d.bottomLeftCorner(n, n) = e;
  return d;
}

std::vector<double> DiracTruncation::spectrum() const {
  // interleaved ordering (f2(k), f1(k), f2(k+1), ...): block-tridiagonal
  // with zero diagonal blocks and superdiagonal chi(k_lo), rho(k_lo),
  // chi(k_lo+1), rho(k_lo+1), ..., chi(k_hi)
  const int m = dim(), n = sites();
  std::vector<Mat> diag(2 * n, Mat::Zero(m, m));
  std::vector<Mat> off;
  off.reserve(2 * n - 1);
  for (int i = 0; i < n; ++i) {
    off.push_back(chi_[i]);  // (f2(k), f1(k)) block of D is chi(k)
    if (i + 1 < n) off.push_back(rho_[i]);
  }
  return block_tridiag_eigenvalues(diag, off);
}

DiracTruncation truncate_dirac(const DiracCoefficients& d, int k_lo,
                               int k_hi) {
  if (k_hi < k_lo) throw WindowTooSmall("truncate_dirac: k_hi < k_lo");
  std::vector<Mat> chi_diag, rho_sub;
  for (int k = k_lo; k <= k_hi; ++k) chi_diag.push_back(d.chi().at(k));
  for (int k = k_lo; k < k_hi; ++k) rho_sub.push_back(d.rho().at(k));
  return DiracTruncation(k_lo, std::move(chi_diag), std::move(rho_sub));
}

Mat dirac_window_dense(const MatrixSeq& rho, const MatrixSeq& chi, int k_lo,
                       int k_hi) {
  const int m = rho.dim(), n = k_hi - k_lo + 1;
  Mat e = Mat::Zero(n * m, n * m);
  for (int i = 0; i < n; ++i) e.block(i * m, i * m, m, m) = chi.at(k_lo + i);
  for (int i = 1; i < n; ++i)
    e.block(i * m, (i - 1) * m, m, m) = rho.at(k_lo + i - 1);
  Mat d = Mat::Zero(2 * n * m, 2 * n * m);
  d.topRightCorner(n * m, n * m) = e.adjoint();
  d.bottomLeftCorner(n * m, n * m) = e;
  return d;
}

std::vector<double> dirac_spectrum_susy(const DiracCoefficients& d, int k_lo,
                                        int k_hi) {
  SusyFactors f = factorize_susy(d);
  std::vector<double> h1 = spectrum_estimate(truncate_jacobi(f.h1, k_lo, k_hi));
  std::vector<double> out;
  out.reserve(2 * h1.size());
  for (auto it = h1.rbegin(); it != h1.rend(); ++it)
    out.push_back(-std::sqrt(std::max(0.0, *it)));
  for (double v : h1) out.push_back(std::sqrt(std::max(0.0, v)));
  return out;
}

NormalForm normal_form(const MatrixSeq& rho, const MatrixSeq& chi,
                       double tol) {
  const int m = rho.dim();
  const int k_lo = rho.k_lo(), k_hi = rho.k_hi();
  NormalForm nf;
  nf.k_lo = k_lo;

  // Q(k), rho_tilde(k) for k in [k_lo-1, k_hi] (extension supplies k_lo-1)
  std::vector<Mat> q(k_hi - k_lo + 2), rt(k_hi - k_lo + 2);
  auto qi = [&](int k) -> Mat& { return q[k - (k_lo - 1)]; };
  auto rti = [&](int k) -> Mat& { return rt[k - (k_lo - 1)]; };
  for (int k = k_lo - 1; k <= k_hi; ++k) {
    const Mat& r = rho.at(k);
    if (rel_herm_defect(r) > 1e-10) throw NotDiagonalPositive(k);
    if (is_diagonal_positive(r, tol)) {
      qi(k) = Mat::Identity(m, m);
      rti(k) = r;
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(r));
    double scale = std::max(1.0, opnorm(r));
    for (int i = 0; i < m; ++i)
      if (std::abs(es.eigenvalues()(i)) <= tol * scale) throw SingularRho(k);
    qi(k) = es.eigenvectors().adjoint();  // Q rho Q^{-1} diagonal
    rti(k) = es.eigenvalues().cast<cplx>().asDiagonal();
  }

  // sign recursion: eps(k) = sign(rho_tilde(k)), eps_t(k_lo) = I,
  // eps_t(k+1) = eps_t(k) eps(k); rho_hat = eps rho_tilde > 0
  std::vector<Mat> et(k_hi - k_lo + 2);
  auto eti = [&](int k) -> Mat& { return et[k - k_lo]; };
  eti(k_lo) = Mat::Identity(m, m);
  for (int k = k_lo; k <= k_hi; ++k) {
    Mat eps = Mat::Zero(m, m);
    for (int i = 0; i < m; ++i)
      eps(i, i) = rti(k)(i, i).real() > 0.0 ? 1.0 : -1.0;
    if (k < k_hi) eti(k + 1) = eti(k) * eps;
  }
  // the window's right edge reuses the recursion value; eps beyond it is
  // not needed because rho_hat(k_hi) uses eps(k_hi) = eps_t(k_hi) eps_t(k_hi+1)
  // only through the product below
  std::vector<Mat> rho_hat(k_hi - k_lo + 1), chi_hat(k_hi - k_lo + 1);
  std::vector<Mat> u_blocks(k_hi - k_lo + 1);
  for (int k = k_lo; k <= k_hi; ++k) {
    Mat eps = Mat::Zero(m, m);
    for (int i = 0; i < m; ++i)
      eps(i, i) = rti(k)(i, i).real() > 0.0 ? 1.0 : -1.0;
    rho_hat[k - k_lo] = eps * rti(k);
    const Mat& et_k = eti(k);
    const Mat& q_km1 = qi(k - 1);
    chi_hat[k - k_lo] =
        et_k * q_km1 * chi.at(k) * small_inverse(qi(k)) * et_k;
    Mat u = Mat::Zero(2 * m, 2 * m);
    u.topLeftCorner(m, m) = et_k * qi(k);
    u.bottomRightCorner(m, m) = et_k * q_km1;
    u_blocks[k - k_lo] = u;
  }
  nf.u = std::move(u_blocks);
  nf.rho_hat = MatrixSeq(k_lo, std::move(rho_hat), rho.extension(),
                         rho.period());
  nf.chi_hat = MatrixSeq(k_lo, std::move(chi_hat), chi.extension(),
                         chi.period());
  return nf;
}

namespace {

Mat dirac_m_route(const DiracCoefficients& d, const SusyFactors& f, cplx z,
                  int k, Side side, DiracRoute route, const WeylOptions& opt_in) {
  const Mat& rho = d.rho().at(k);
  Mat rh = rho_half_power(rho, -0.5);
  cplx z2 = z * z;
  // inside the spectral gap of D, z^2 sits on the negative real axis, a
  // resolvent-set point of the nonnegative factors H1, H2
  WeylOptions opt = opt_in;
  if (z2.real() < 0.0 && std::abs(z2.imag()) < 1e-8)
    opt.allow_real_resolvent = true;
  if (route == DiracRoute::H1) {
    Mat mh =
        opt.fast_tail
            ? (side == Side::Plus ? weyl_pair(f.h1, z2, k, opt).plus
                                  : weyl_pair(f.h1, z2, k, opt).minus)
            : weyl_m_big(f.h1, z2, k, side, opt).value;
    return (-1.0 / z) * rho + (1.0 / z) * (rh * mh * rh);
  }
  Mat mh = opt.fast_tail
               ? (side == Side::Plus ? weyl_pair(f.h2, z2, k, opt).plus
                                     : weyl_pair(f.h2, z2, k, opt).minus)
               : weyl_m_big(f.h2, z2, k, side, opt).value;
  Mat chi_inv = small_inverse(d.chi().at(k));
  Mat core = chi_inv * mh * chi_inv.adjoint();
  core.diagonal().array() -= 1.0;
  Eigen::PartialPivLU<Mat> lu(core);
  if (std::abs(lu.determinant()) < 1e-250)
    throw SingularTransform("H2-route inner inverse is singular");
  Mat rho_inv = rho_half_power(rho, -1.0);
  return -z * rho_inv - z * (rh * lu.inverse() * rh);
}

}  // namespace

WeylValue dirac_weyl(const DiracCoefficients& d, cplx z, int k, Side side,
                     DiracRoute route, const WeylOptions& opt) {
  if (std::abs(z.imag()) < 1e-8) throw NearRealAxis();
  SusyFactors f = factorize_susy(d);
  WeylValue w;
  w.z = z;
  w.k = k;
  w.kind = WeylKind::BigM;
  w.side = side;
  w.value = dirac_m_route(d, f, z, k, side, route, opt);
  Mat other = dirac_m_route(
      d, f, z, k, side,
      route == DiracRoute::H1 ? DiracRoute::H2 : DiracRoute::H1, opt);
  w.cross_residual = opnorm(w.value - other);
  return w;
}

namespace {

MPair dirac_pair(const DiracCoefficients& d, const SusyFactors& f, cplx z,
                 int k, const WeylOptions& opt) {
  MPair p;
  p.plus = dirac_m_route(d, f, z, k, Side::Plus, DiracRoute::H1, opt);
  p.minus = dirac_m_route(d, f, z, k, Side::Minus, DiracRoute::H1, opt);
  return p;
}

}  // namespace

BigWeylMatrix dirac_big_weyl(const DiracCoefficients& d, cplx z, int k,
                             const WeylOptions& opt) {
  if (std::abs(z.imag()) < 1e-8) throw NearRealAxis();
  SusyFactors f = factorize_susy(d);
  MPair p = dirac_pair(d, f, z, k, opt);
  BigWeylMatrix w;
  w.z = z;
  w.k = k;
  Mat g = small_inverse(p.minus - p.plus);
  Mat s = p.minus + p.plus;
  w.m11 = g;
  w.m12 = 0.5 * (g * s);
  w.m21 = 0.5 * (s * g);
  w.m22 = p.plus * g * p.minus;
  w.m22_gap = opnorm(w.m22 - p.minus * g * p.plus);
  return w;
}

XiGrid upsilon_dirac_grid(const DiracCoefficients& d, int k, double lo,
                          double hi, int nodes, double eps,
                          const WeylOptions& opt, int workers) {
  if (nodes < 2) throw GridTooCoarse("upsilon_dirac_grid: need >= 2 nodes");
  XiGrid g;
  g.k = k;
  g.epsilon = eps;
  g.target = XiTarget::UpsilonDirac;
  g.lambdas.resize(nodes);
  g.values.resize(nodes);
  const double h = (hi - lo) / (nodes - 1);
  for (int i = 0; i < nodes; ++i) g.lambdas[i] = lo + h * i;
  SusyFactors f = factorize_susy(d);
  parallel_for(
      nodes,
      [&](long i) {
        cplx z(g.lambdas[i], eps);
        MPair p = dirac_pair(d, f, z, k, opt);
        Mat gg = small_inverse(p.minus - p.plus);
        Mat s = p.minus + p.plus;
        const int m = d.dim();
        Mat big(2 * m, 2 * m);
        big.topLeftCorner(m, m) = gg;
        big.topRightCorner(m, m) = 0.5 * (gg * s);
        big.bottomLeftCorner(m, m) = 0.5 * (s * gg);
        big.bottomRightCorner(m, m) = p.plus * gg * p.minus;
        Mat lg = principal_matrix_log(big);
        g.values[i] = (lg - lg.adjoint()) / cplx(0.0, 2.0 * M_PI);
      },
      workers);
  return g;
}

BorgFamilyMember borg_family(double e_minus, double e_plus,
                             const std::vector<int>& signs, int k_lo,
                             int k_hi) {
  if (e_minus < 0.0 || e_plus <= e_minus)
    throw BadInterval("borg_family: need 0 <= E- < E+");
  const int m = static_cast<int>(signs.size());
  Mat rho = Mat::Zero(m, m), chi = Mat::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    if (signs[j] != 1 && signs[j] != -1)
      throw BadInterval("borg_family: signs must be +-1");
    rho(j, j) = 0.5 * (std::sqrt(e_plus) - signs[j] * std::sqrt(e_minus));
    chi(j, j) = 0.5 * (std::sqrt(e_plus) + signs[j] * std::sqrt(e_minus));
  }
  BorgFamilyMember mem;
  mem.signs = signs;
  mem.rho_value = rho;
  mem.chi_value = chi;
  mem.coeffs = validate_dirac(MatrixSeq::constant(rho, k_lo, k_hi),
                              MatrixSeq::constant(chi, k_lo, k_hi));
  return mem;
}

SusyPair susy_eigen_map(const Mat& e_fin, const Vec& u, int which, cplx z) {
  if (std::abs(z) < 1e-14) throw ZeroEnergy();
  SusyPair p;
  if (which == 1) {
    p.u1 = u;
    p.u2 = (e_fin * u) / z;
  } else if (which == 2) {
    p.u2 = u;
    p.u1 = (e_fin.adjoint() * u) / z;
  } else {
    throw DimensionMismatch("susy_eigen_map: which must be 1 or 2");
  }
  Vec r1 = e_fin.adjoint() * p.u2 - z * p.u1;
  Vec r2 = e_fin * p.u1 - z * p.u2;
  p.residual = std::sqrt(r1.squaredNorm() + r2.squaredNorm());
  return p;
}

}  // namespace jborg
