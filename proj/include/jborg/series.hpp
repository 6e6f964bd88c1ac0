#pragma once

#include "jborg/jacobi.hpp"

namespace jborg {

// Finite formal series  S(z) = sum_{n=lead}^{order} S_n z^{-n}  with complex
// m x m matrix coefficients. `lead` may be negative (polynomial part, e.g.
// M_- = -I z + B + ...). Arithmetic is exact through `order` and respects
// noncommutativity.
class MatrixSeries {
 public:
  MatrixSeries(int m, int lead, int order)
      : m_(m), lead_(lead), order_(order),
        coeffs_(static_cast<std::size_t>(order - lead + 1), Mat::Zero(m, m)) {
    if (order < lead) throw DimensionMismatch("MatrixSeries: order < lead");
  }

  int dim() const { return m_; }
  int lead() const { return lead_; }
  int order() const { return order_; }

  const Mat& coeff(int n) const {
    if (n < lead_ || n > order_)
      throw DimensionMismatch("MatrixSeries: coefficient outside range");
    return coeffs_[n - lead_];
  }
  Mat& coeff(int n) {
    if (n < lead_ || n > order_)
      throw DimensionMismatch("MatrixSeries: coefficient outside range");
    return coeffs_[n - lead_];
  }
  Mat coeff_or_zero(int n) const {
    if (n < lead_ || n > order_) return Mat::Zero(m_, m_);
    return coeffs_[n - lead_];
  }

  MatrixSeries operator+(const MatrixSeries& o) const;
  MatrixSeries operator-(const MatrixSeries& o) const;
  MatrixSeries operator*(const MatrixSeries& o) const;
  MatrixSeries operator-() const;

  // Series inverse; requires an invertible leading coefficient.
  MatrixSeries inverse() const;

  // d/dz, coefficientwise.
  MatrixSeries derivative() const;

  // log(I + C) for a series C with lead >= 1, through C.order().
  static MatrixSeries log_one_plus(const MatrixSeries& c);

  MatrixSeries truncated(int new_order) const;

  double max_coeff_norm() const {
    double s = 0;
    for (const Mat& c : coeffs_) s = std::max(s, c.norm());
    return s;
  }

 private:
  int m_, lead_, order_;
  std::vector<Mat> coeffs_;
};

// Expansion coefficients m_{pm,j}(k), j = 1..J, of the half-line m-function.
MatrixSeries m_series(const JacobiCoefficients& c, int k, Side side, int J);

// Expansion coefficients of M_pm; M_+ has no polynomial part, M_- carries
// the leading -I z and constant term B(k).
MatrixSeries M_series(const JacobiCoefficients& c, int k, Side side, int J);

// Coefficients r_j(k) of the diagonal Green's matrix g(z,k) = (M_- - M_+)^{-1}.
MatrixSeries g_series(const JacobiCoefficients& c, int k, int J);

// Coefficients s_j(k) of -d/dz ln g(z,k), with the formal-series matrix log;
// s_1 = I by construction.
MatrixSeries s_series(const JacobiCoefficients& c, int k, int J);

struct XiGrid;  // herglotz module

// Right-hand side of the trace formula:
//   1/2 (E-^{j-1} + E+^{j-1}) I + 1/2 (j-1) \int λ^{j-2} [I - 2 Ξ(λ,k)] dλ
// by composite Simpson quadrature on the grid.
Mat trace_rhs(int j, const XiGrid& xi, double e_minus, double e_plus);

}  // namespace jborg
