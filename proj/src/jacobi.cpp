#include "jborg/jacobi.hpp"

#include <algorithm>

namespace jborg {

JacobiCoefficients validate_jacobi(const MatrixSeq& a, const MatrixSeq& b,
                                   double tol) {
  if (a.dim() != b.dim())
    throw DimensionMismatch("validate_jacobi: A and B dimensions differ");

  std::vector<Mat> av, bv;
  double bound = 0.0;
  for (int k = a.k_lo(); k <= a.k_hi(); ++k) {
    const Mat& ak = a.at(k);
    if (rel_herm_defect(ak) > tol) throw NotHermitian(k);
    Mat ah = hermitize(ak);
    if (min_eigenvalue(ah) <= tol * std::max(1.0, opnorm(ah)))
      throw NotPositiveDefinite(k);
    av.push_back(ah);
  }
  for (int k = b.k_lo(); k <= b.k_hi(); ++k) {
    const Mat& bk = b.at(k);
    if (rel_herm_defect(bk) > tol) throw NotHermitian(k);
    bv.push_back(hermitize(bk));
  }
  for (int k = std::min(a.k_lo(), b.k_lo()); k <= std::max(a.k_hi(), b.k_hi());
       ++k)
    bound = std::max(bound, opnorm(a.at(k)) + opnorm(b.at(k)));

  JacobiCoefficients c;
  c.a_ = MatrixSeq(a.k_lo(), std::move(av), a.extension(), a.period());
  c.b_ = MatrixSeq(b.k_lo(), std::move(bv), b.extension(), b.period());
  c.bound_ = bound;
  return c;
}

Mat TruncatedOperator::dense() const {
  const int m = dim();
  const int n = sites() * m;
  Mat h = Mat::Zero(n, n);
  for (int i = 0; i < sites(); ++i)
    h.block(i * m, i * m, m, m) = diag_[i];
  for (int i = 0; i + 1 < sites(); ++i) {
    h.block(i * m, (i + 1) * m, m, m) = off_[i];
    h.block((i + 1) * m, i * m, m, m) = off_[i].adjoint();
  }
  return h;
}

TruncatedOperator truncate_jacobi(const JacobiCoefficients& c, int k_lo,
                                  int k_hi) {
  if (k_hi < k_lo) throw WindowTooSmall("truncate_jacobi: k_hi < k_lo");
  std::vector<Mat> diag, off;
  diag.reserve(k_hi - k_lo + 1);
  for (int k = k_lo; k <= k_hi; ++k) diag.push_back(c.b().at(k));
  for (int k = k_lo; k < k_hi; ++k) off.push_back(c.a().at(k));
  return TruncatedOperator(k_lo, std::move(diag), std::move(off));
}

Mat wronskian(const MatrixSeq& f, const MatrixSeq& g, const MatrixSeq& a,
              int k) {
  return f.at(k) * a.at(k) * g.at(k + 1) - f.at(k + 1) * a.at(k) * g.at(k);
}

std::vector<double> spectrum_estimate(const TruncatedOperator& t) {
  return block_tridiag_eigenvalues(t.diag_blocks(), t.off_blocks());
}

}  // namespace jborg
