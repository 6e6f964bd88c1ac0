#pragma once

#include "jborg/jacobi.hpp"

namespace jborg {

enum class WeylKind { BigM, SmallM };

struct WeylOptions {
  double tol = 1e-10;
  long depth0 = 64;
  long depth_cap = 1L << 20;
  // Evaluate m/M through the constant-tail transfer-matrix splitting where
  // the extension allows it (grid sweeps); the depth-doubling Riccati
  // iteration is the reference path and the public contract.
  bool fast_tail = false;
  // Skip the near-real-axis guard: the caller asserts z is a real-axis
  // point in the resolvent set (used for z^2 < 0 with the nonnegative
  // Dirac factors). Boundary values near the spectrum still need the
  // smoothing offset.
  bool allow_real_resolvent = false;
};

struct WeylValue {
  cplx z;
  int k = 0;
  Side side = Side::Plus;
  WeylKind kind = WeylKind::SmallM;
  Mat value;
  long depth = 0;
  double residual = 0.0;        // Riccati residual of the defining equation
  double cross_residual = 0.0;  // BigM: gap to the direct Riccati iteration
};

// Matrix solutions theta, phi of the three-term recurrence with the
// identity/zero initial pattern at the reference site k0.
struct FundamentalSolutions {
  cplx z;
  int k0 = 0;
  MatrixSeq theta, phi;
};

FundamentalSolutions fundamental_solutions(const JacobiCoefficients& c,
                                           cplx z, int k0, int lo, int hi);

// Half-line m-functions by Riccati recursion with depth doubling.
WeylValue weyl_m_small(const JacobiCoefficients& c, cplx z, int k, Side side,
                       const WeylOptions& opt = {});

// Weyl--Titchmarsh M-matrices through the m-relations, cross-checked
// against the direct Riccati iteration.
WeylValue weyl_m_big(const JacobiCoefficients& c, cplx z, int k, Side side,
                     const WeylOptions& opt = {});

// Both M-matrices at once; the workhorse of grid sweeps.
struct MPair {
  Mat plus, minus;
};
MPair weyl_pair(const JacobiCoefficients& c, cplx z, int k,
                const WeylOptions& opt = {});

// Dirichlet finite-section approximant M_N(z,k0): the Weyl matrix of the
// section cut off at N, converging to M_pm as N -> pm infinity. Computed by
// the finite Riccati continued fraction from the Dirichlet boundary.
Mat m_finite(const JacobiCoefficients& c, cplx z, int k0, int N);

// Same object through the renormalized fundamental-solution quotient
// A(k0) phi(z,N,k0)^{-1} theta(z,N,k0); kept as an independent route for
// tests (its conditioning degrades with |N - k0|).
Mat m_finite_frame(const JacobiCoefficients& c, cplx z, int k0, int N);

// Weyl solution psi_pm(z,k,k0) built from fundamental solutions and M_pm.
Mat weyl_solution(const FundamentalSolutions& fs, const JacobiCoefficients& c,
                  const Mat& m_big, int k);

// Green's matrix of the whole-line operator.
Mat greens_full(const JacobiCoefficients& c, cplx z, int k, int l,
                const WeylOptions& opt = {});

// Green's matrix of the Dirichlet half-line operator H_{side,k0}.
Mat greens_halfline(const JacobiCoefficients& c, cplx z, int k, int l, int k0,
                    Side side, const WeylOptions& opt = {});

struct BigWeylMatrix {
  cplx z;
  int k = 0;
  Mat m11, m12, m21, m22;
  double m22_gap = 0.0;  // discrepancy between the two block orderings
  Mat assemble() const;
};

BigWeylMatrix big_weyl(const JacobiCoefficients& c, cplx z, int k,
                       const WeylOptions& opt = {});

// Constant-coefficient half-line m-function (the fixed point of the Riccati
// map), from the contracting invariant subspace of the transfer matrix.
Mat tail_m_fixed_point(const Mat& a, const Mat& b, cplx z);

}  // namespace jborg
