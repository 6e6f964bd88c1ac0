#pragma once

#include <functional>

#include "jborg/weyl.hpp"

namespace jborg {

enum class XiTarget { XiOfG, XiPM, UpsilonBig, UpsilonDirac };

// Hermitian xi-function values on a real grid, computed at distance epsilon
// above the axis. For XiOfG / XiPM / UpsilonBig the values are
// (1/pi) Im log of g, ±M_pm, M respectively; UpsilonDirac grids are filled
// by the dirac module.
struct XiGrid {
  int k = 0;
  std::vector<double> lambdas;
  std::vector<Mat> values;
  double epsilon = 1e-3;
  XiTarget target = XiTarget::XiOfG;
  Side side = Side::Plus;  // used by XiPM only
};

// Matrix-valued measure: discrete support with PSD weights; `density`
// optionally records the smoothed a.c. density at the nodes.
struct MatrixMeasure {
  std::vector<double> nodes;
  std::vector<Mat> weights;
  std::vector<Mat> density;
  bool normalized = false;

  Mat total_mass() const;
  // Adds weights of nodes closer than tol; keeps node order.
  void merge_duplicates(double tol);
};

using MatrixEvaluator = std::function<Mat(cplx)>;

// f(lambda + i eps); the eps-extrapolation policy lives in callers.
Mat boundary_value(const MatrixEvaluator& f, double lambda, double eps);

// (1/pi) Im principal matrix log of the target at lambda + i eps.
Mat xi_point(const JacobiCoefficients& c, int k, double lambda, double eps,
             XiTarget target = XiTarget::XiOfG, Side side = Side::Plus,
             const WeylOptions& opt = {});

XiGrid xi_grid(const JacobiCoefficients& c, int k, double lo, double hi,
               int nodes, double eps, XiTarget target = XiTarget::XiOfG,
               Side side = Side::Plus, const WeylOptions& opt = {},
               int workers = 0);

// Richardson extrapolation over eps in {4e, 2e, e}: the smoothing error is
// first order in eps, so 2 g(e) - g(2e) cancels it. Off by default in the
// sweep commands (triples the cost).
XiGrid xi_grid_extrapolated(const JacobiCoefficients& c, int k, double lo,
                            double hi, int nodes, double eps,
                            XiTarget target = XiTarget::XiOfG,
                            Side side = Side::Plus,
                            const WeylOptions& opt = {}, int workers = 0);

// Numerical essential spectrum for reflectionless checks: the band of a
// 2000-site Dirichlet truncation with 1%-trimmed endpoint eigenvalues.
std::pair<double, double> essential_spectrum_estimate(
    const JacobiCoefficients& c);

// Stieltjes inversion: density (1/pi) Im f(lambda + i eps) on a uniform
// grid over [lo, hi], one PSD weight per cell (trapezoid masses).
MatrixMeasure stieltjes_measure(const MatrixEvaluator& f, double lo,
                                double hi, int n_nodes, double eps,
                                int workers = 0);

struct ReflectionlessReport {
  std::vector<int> sites;
  std::vector<double> max_deviation;  // max over the grid of |Xi - I/2|
  double delta = 0.0;
  bool verdict = false;
};

// Checks Xi(.,k) against I/2 on the middle 80% of [e_minus, e_plus].
ReflectionlessReport reflectionless_check(const JacobiCoefficients& c,
                                          double e_minus, double e_plus,
                                          const std::vector<int>& k_list,
                                          double eps, double delta,
                                          int grid_nodes = 201,
                                          const WeylOptions& opt = {},
                                          int workers = 0);

// Diagnostic for the stronger reflectionless property:
// |M_+(lambda + i eps, k) - M_-(lambda - i eps, k)|.
double strong_reflectionless_gap(const JacobiCoefficients& c, double lambda,
                                 int k, double eps,
                                 const WeylOptions& opt = {});

// Square root [(z-E-)(z-E+)]^{1/2} normalized to ~ z at infinity.
cplx borg_branch_sqrt(cplx z, double e_minus, double e_plus);

// Closed forms of the single-band reference operator, times the identity.
Mat borg_reference_g(cplx z, double e_minus, double e_plus, int m);
Mat borg_reference_M(cplx z, double e_minus, double e_plus, Side side, int m);
double gamma_density(double lambda, double e_minus, double e_plus);

}  // namespace jborg
