#pragma once

#include <vector>

#include "jborg/matrix_seq.hpp"

namespace jborg {

enum class Side { Plus, Minus };

// Validated coefficient pair (A, B) of a matrix-valued Jacobi operator
//   H = A S^+ + A^- S^- + B,
// A(k) Hermitian positive definite, B(k) Hermitian, uniformly bounded by C.
// Entries are symmetrized after validation to remove roundoff drift.
class JacobiCoefficients {
 public:
  JacobiCoefficients() = default;

  int dim() const { return a_.dim(); }
  const MatrixSeq& a() const { return a_; }
  const MatrixSeq& b() const { return b_; }
  double bound() const { return bound_; }

  friend JacobiCoefficients validate_jacobi(const MatrixSeq& a,
                                            const MatrixSeq& b, double tol);

 private:
  MatrixSeq a_, b_;
  double bound_ = 0.0;
};

JacobiCoefficients validate_jacobi(const MatrixSeq& a, const MatrixSeq& b,
                                   double tol = 1e-12);

// Dense Hermitian block-tridiagonal Dirichlet section of H over the site
// range [k_lo, k_hi]; block bandwidth exactly one. Blocks are stored; the
// assembled dense matrix is materialized on demand.
class TruncatedOperator {
 public:
  TruncatedOperator(int k_lo, std::vector<Mat> diag, std::vector<Mat> off)
      : k_lo_(k_lo), diag_(std::move(diag)), off_(std::move(off)) {}

  int k_lo() const { return k_lo_; }
  int k_hi() const { return k_lo_ + sites() - 1; }
  int sites() const { return static_cast<int>(diag_.size()); }
  int dim() const { return static_cast<int>(diag_[0].rows()); }
  const std::vector<Mat>& diag_blocks() const { return diag_; }
  const std::vector<Mat>& off_blocks() const { return off_; }

  Mat dense() const;

 private:
  int k_lo_;
  std::vector<Mat> diag_;  // B(k)
  std::vector<Mat> off_;   // A(k), coupling k -> k+1
};

TruncatedOperator truncate_jacobi(const JacobiCoefficients& c, int k_lo,
                                  int k_hi);

// W(f,g)(k) = f(k) A(k) g(k+1) - f(k+1) A(k) g(k).
Mat wronskian(const MatrixSeq& f, const MatrixSeq& g, const MatrixSeq& a,
              int k);

// All eigenvalues of the Dirichlet truncation, ascending.
std::vector<double> spectrum_estimate(const TruncatedOperator& t);

}  // namespace jborg
