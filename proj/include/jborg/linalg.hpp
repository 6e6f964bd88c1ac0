#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace jborg {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;

inline Mat hermitize(const Mat& x) { return 0.5 * (x + x.adjoint()); }

// Spectral (2-)norm; matrices here are small, the SVD cost is irrelevant.
inline double opnorm(const Mat& x) {
  if (x.size() == 0) return 0.0;
  return x.jacobiSvd().singularValues()(0);
}

inline double rel_herm_defect(const Mat& x) {
  double n = x.norm();
  if (n == 0.0) return 0.0;
  return (x - x.adjoint()).norm() / n;
}

// Eigenvalues of a Hermitian matrix, ascending.
inline RealVec herm_eigenvalues(const Mat& x) {
  Eigen::SelfAdjointEigenSolver<Mat> es(x, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline double min_eigenvalue(const Mat& x) {
  return herm_eigenvalues(hermitize(x)).minCoeff();
}

// Principal PSD square root of a Hermitian PSD matrix; tiny negative
// eigenvalues from roundoff are clipped to zero.
Mat psd_sqrt(const Mat& x);

// Principal matrix logarithm via eigendecomposition of a (generally
// non-Hermitian) matrix. Throws LogBranchFailure if an eigenvalue sits on
// the closed negative real axis within `axis_tol`, or if the eigenvector
// matrix is numerically singular.
Mat principal_matrix_log(const Mat& x, double axis_tol = 1e-14);

// Inverse of a small matrix into `out` without heap churn on the hot path.
// m = 1, 2, 3 use cofactor formulas; larger sizes fall back to LU.
void small_inverse(const Mat& x, Mat& out);

inline Mat small_inverse(const Mat& x) {
  Mat out(x.rows(), x.cols());
  small_inverse(x, out);
  return out;
}

// Eigenvalues (ascending) of a Hermitian block-tridiagonal matrix given its
// diagonal blocks and super-diagonal blocks, via banded LAPACK storage.
// diag.size() == off.size() + 1; scalar bandwidth equals the block size.
std::vector<double> block_tridiag_eigenvalues(const std::vector<Mat>& diag,
                                              const std::vector<Mat>& off);

}  // namespace jborg
