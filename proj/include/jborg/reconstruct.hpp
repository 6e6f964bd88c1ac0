#pragma once

#include "jborg/herglotz.hpp"

namespace jborg {

// Orthonormal system of matrix-valued polynomials with respect to a
// normalized matrix measure, together with the recovered three-term
// recurrence coefficients (Lanczos index space, starting at 0).
struct OrthoPolySystem {
  MatrixMeasure measure;
  // poly_coeffs[k][j] is the coefficient of z^j in P_k(z)
  std::vector<std::vector<Mat>> poly_coeffs;
  MatrixSeq recovered_a;  // a_k = int λ P_k dν P_{k+1}^*, k = 0..n-2
  MatrixSeq recovered_b;  // b_k = int λ P_k dν P_k^*,     k = 0..n-1

  Mat eval_poly(int k, cplx z) const;
};

// Spectral measure of the N-site Dirichlet truncation of H_{side,k0}:
// nodes are eigenvalues, weights the outer products of the k0-block of the
// eigenvectors. Total mass is the identity by completeness.
MatrixMeasure spectral_measure_halfline(const JacobiCoefficients& c, int k0,
                                        Side side, int N);

// Three-term construction of the orthonormal polynomials; the Hermitian
// positive square-root convention fixes a_k > 0.
OrthoPolySystem block_lanczos(const MatrixMeasure& measure, int n_steps,
                              double breakdown_tol = 1e-12);

// Recovered coefficients mapped back to lattice sites:
// plus side:  b(k0+k) = b_k, a(k0+k) = a_k;
// minus side: b(k0-k) = b_k, a(k0-k-1) = a_k.
struct RecoveredCoefficients {
  MatrixSeq a, b;
};
RecoveredCoefficients map_to_lattice(const OrthoPolySystem& sys, int k0,
                                     Side side);

// Residual of the polynomial / fundamental-solution identities
//   P_{+,k}(z,k0) = phi(z,k0+k,k0-1),  P_{-,k}(z,k0) = theta(z,k0-k,k0);
// returns the max of the two norms, with polynomials built from N-site
// half-line measures of c.
double poly_solution_identity(const JacobiCoefficients& c, int k0, cplx z,
                              int k, int N);

}  // namespace jborg
