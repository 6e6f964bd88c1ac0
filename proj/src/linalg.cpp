#include "jborg/linalg.hpp"

#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <cmath>

#include "jborg/errors.hpp"

namespace jborg {

Mat psd_sqrt(const Mat& x) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(x));
  RealVec d = es.eigenvalues();
  for (int i = 0; i < d.size(); ++i) d(i) = d(i) > 0.0 ? std::sqrt(d(i)) : 0.0;
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

Mat principal_matrix_log(const Mat& x, double axis_tol) {
  Eigen::ComplexEigenSolver<Mat> es(x);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("eigendecomposition failed in matrix log");
  const Vec& ev = es.eigenvalues();
  double scale = x.norm();
  for (int i = 0; i < ev.size(); ++i) {
    cplx w = ev(i);
    if (w.real() <= 0.0 && std::abs(w.imag()) <= axis_tol * std::max(1.0, scale))
      throw LogBranchFailure("eigenvalue on the closed negative real axis");
  }
  Vec lg(ev.size());
  for (int i = 0; i < ev.size(); ++i) lg(i) = std::log(ev(i));
  const Mat& v = es.eigenvectors();
  Eigen::PartialPivLU<Mat> lu(v);
  if (std::abs(lu.determinant()) < 1e-300)
    throw NumericalFailure("defective eigenvector matrix in matrix log");
  return v * lg.asDiagonal() * lu.inverse();
}

void small_inverse(const Mat& x, Mat& out) {
  const auto n = x.rows();
  switch (n) {
    case 1: {
      out(0, 0) = 1.0 / x(0, 0);
      return;
    }
    case 2: {
      cplx det = x(0, 0) * x(1, 1) - x(0, 1) * x(1, 0);
      cplx inv = 1.0 / det;
      out(0, 0) = x(1, 1) * inv;
      out(0, 1) = -x(0, 1) * inv;
      out(1, 0) = -x(1, 0) * inv;
      out(1, 1) = x(0, 0) * inv;
      return;
    }
    case 3: {
      cplx c00 = x(1, 1) * x(2, 2) - x(1, 2) * x(2, 1);
      cplx c01 = x(1, 2) * x(2, 0) - x(1, 0) * x(2, 2);
      cplx c02 = x(1, 0) * x(2, 1) - x(1, 1) * x(2, 0);
      cplx det = x(0, 0) * c00 + x(0, 1) * c01 + x(0, 2) * c02;
      cplx inv = 1.0 / det;
      out(0, 0) = c00 * inv;
      out(1, 0) = c01 * inv;
      out(2, 0) = c02 * inv;
      out(0, 1) = (x(0, 2) * x(2, 1) - x(0, 1) * x(2, 2)) * inv;
      out(1, 1) = (x(0, 0) * x(2, 2) - x(0, 2) * x(2, 0)) * inv;
      out(2, 1) = (x(0, 1) * x(2, 0) - x(0, 0) * x(2, 1)) * inv;
      out(0, 2) = (x(0, 1) * x(1, 2) - x(0, 2) * x(1, 1)) * inv;
      out(1, 2) = (x(0, 2) * x(1, 0) - x(0, 0) * x(1, 2)) * inv;
      out(2, 2) = (x(0, 0) * x(1, 1) - x(0, 1) * x(1, 0)) * inv;
      return;
    }
    default:
      out = x.partialPivLu().inverse();
  }
}

std::vector<double> block_tridiag_eigenvalues(const std::vector<Mat>& diag,
                                              const std::vector<Mat>& off) {
  const int nb = static_cast<int>(diag.size());
  const int m = static_cast<int>(diag[0].rows());
  const int n = nb * m;
  // scalar bandwidth: entry (b*m, (b+1)*m + m-1) of the super block sits at
  // offset 2m-1
  const int kd = 2 * m - 1;

  // LAPACK upper banded storage: ab(kd + i - j, j) = a(i, j), column-major.
  std::vector<lapack_complex_double> ab(
      static_cast<std::size_t>(kd + 1) * n, lapack_complex_double(0.0, 0.0));
  auto put = [&](int i, int j, cplx v) {
    ab[static_cast<std::size_t>(j) * (kd + 1) + (kd + i - j)] =
        lapack_complex_double(v.real(), v.imag());
  };
  for (int b = 0; b < nb; ++b)
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) {
        int i = b * m + r, j = b * m + c;
        if (i <= j) put(i, j, diag[b](r, c));
      }
  for (int b = 0; b + 1 < nb; ++b)
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) put(b * m + r, (b + 1) * m + c, off[b](r, c));

  std::vector<double> w(n);
  int info = LAPACKE_zhbev(LAPACK_COL_MAJOR, 'N', 'U', n, kd, ab.data(),
                           kd + 1, w.data(), nullptr, 1);
  if (info != 0)
    throw NumericalFailure("zhbev failed, info=" + std::to_string(info));
  return w;
}

}  // namespace jborg
