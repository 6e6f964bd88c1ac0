#include "jborg/herglotz.hpp"

#include <cmath>

#include "jborg/parallel.hpp"

namespace jborg {

Mat MatrixMeasure::total_mass() const {
  if (weights.empty()) throw DimensionMismatch("empty measure");
  Mat s = Mat::Zero(weights[0].rows(), weights[0].cols());
  for (const Mat& w : weights) s += w;
  return s;
}

void MatrixMeasure::merge_duplicates(double tol) {
  std::vector<double> n2;
  std::vector<Mat> w2;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!n2.empty() && std::abs(nodes[i] - n2.back()) <= tol) {
      w2.back() += weights[i];
    } else {
      n2.push_back(nodes[i]);
      w2.push_back(weights[i]);
    }
  }
  nodes = std::move(n2);
  weights = std::move(w2);
  density.clear();
}

Mat boundary_value(const MatrixEvaluator& f, double lambda, double eps) {
  if (!(eps > 0.0)) throw DimensionMismatch("boundary_value: eps > 0");
  return f(cplx(lambda, eps));
}

namespace {

Mat herm_im(const Mat& x) { return (x - x.adjoint()) / cplx(0.0, 2.0); }

Mat xi_from_argument(const Mat& arg) {
  return herm_im(principal_matrix_log(arg)) / M_PI;
}

Mat xi_argument(const JacobiCoefficients& c, int k, cplx z, XiTarget target,
                Side side, const WeylOptions& opt) {
  switch (target) {
    case XiTarget::XiOfG: {
      MPair p = weyl_pair(c, z, k, opt);
      return small_inverse(p.minus - p.plus);
    }
    case XiTarget::XiPM: {
      MPair p = weyl_pair(c, z, k, opt);
      return side == Side::Plus ? p.plus : Mat(-p.minus);
    }
    case XiTarget::UpsilonBig:
      return big_weyl(c, z, k, opt).assemble();
    case XiTarget::UpsilonDirac:
    default:
      throw DimensionMismatch(
          "UpsilonDirac grids are produced by the dirac module");
  }
}

}  // namespace

Mat xi_point(const JacobiCoefficients& c, int k, double lambda, double eps,
             XiTarget target, Side side, const WeylOptions& opt) {
  if (!(eps > 0.0)) throw DimensionMismatch("xi_point: eps > 0");
  return xi_from_argument(
      xi_argument(c, k, cplx(lambda, eps), target, side, opt));
}

XiGrid xi_grid(const JacobiCoefficients& c, int k, double lo, double hi,
               int nodes, double eps, XiTarget target, Side side,
               const WeylOptions& opt, int workers) {
  if (nodes < 2) throw GridTooCoarse("xi_grid: need at least 2 nodes");
  XiGrid g;
  g.k = k;
  g.epsilon = eps;
  g.target = target;
  g.side = side;
  g.lambdas.resize(nodes);
  g.values.resize(nodes);
  const double h = (hi - lo) / (nodes - 1);
  for (int i = 0; i < nodes; ++i) g.lambdas[i] = lo + h * i;
  parallel_for(
      nodes,
      [&](long i) {
        g.values[i] = xi_point(c, k, g.lambdas[i], eps, target, side, opt);
      },
      workers);
  return g;
}

XiGrid xi_grid_extrapolated(const JacobiCoefficients& c, int k, double lo,
                            double hi, int nodes, double eps,
                            XiTarget target, Side side,
                            const WeylOptions& opt, int workers) {
  XiGrid g1 = xi_grid(c, k, lo, hi, nodes, eps, target, side, opt, workers);
  XiGrid g2 =
      xi_grid(c, k, lo, hi, nodes, 2 * eps, target, side, opt, workers);
  XiGrid g4 =
      xi_grid(c, k, lo, hi, nodes, 4 * eps, target, side, opt, workers);
  for (std::size_t i = 0; i < g1.values.size(); ++i) {
    // two-level elimination of the O(eps) and O(eps^2) terms
    Mat r21 = 2.0 * g1.values[i] - g2.values[i];
    Mat r42 = 2.0 * g2.values[i] - g4.values[i];
    g1.values[i] = r21 + (r21 - r42) / 3.0;
  }
  return g1;
}

std::pair<double, double> essential_spectrum_estimate(
    const JacobiCoefficients& c) {
  auto ev = spectrum_estimate(truncate_jacobi(c, -1000, 999));
  std::size_t trim = ev.size() / 100;
  return {ev[trim], ev[ev.size() - 1 - trim]};
}

MatrixMeasure stieltjes_measure(const MatrixEvaluator& f, double lo,
                                double hi, int n_nodes, double eps,
                                int workers) {
  if (n_nodes < 16) throw GridTooCoarse("stieltjes_measure: n_nodes >= 16");
  if (!(hi > lo)) throw DimensionMismatch("stieltjes_measure: empty interval");
  MatrixMeasure mu;
  mu.nodes.resize(n_nodes);
  mu.density.resize(n_nodes);
  mu.weights.resize(n_nodes);
  const double h = (hi - lo) / (n_nodes - 1);
  for (int i = 0; i < n_nodes; ++i) mu.nodes[i] = lo + h * i;
  parallel_for(
      n_nodes,
      [&](long i) {
        Mat d = herm_im(f(cplx(mu.nodes[i], eps))) / M_PI;
        // clip roundoff-negative eigenvalues so every weight is PSD
        Eigen::SelfAdjointEigenSolver<Mat> es(d);
        RealVec ev = es.eigenvalues();
        double floor = -1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff());
        for (int j = 0; j < ev.size(); ++j)
          if (ev(j) < 0.0 && ev(j) > floor) ev(j) = 0.0;
        d = es.eigenvectors() * ev.asDiagonal() *
            es.eigenvectors().adjoint();
        mu.density[i] = d;
        double cell = (i == 0 || i == n_nodes - 1) ? h / 2.0 : h;
        mu.weights[i] = cell * d;
      },
      workers);
  return mu;
}

ReflectionlessReport reflectionless_check(const JacobiCoefficients& c,
                                          double e_minus, double e_plus,
                                          const std::vector<int>& k_list,
                                          double eps, double delta,
                                          int grid_nodes,
                                          const WeylOptions& opt,
                                          int workers) {
  const double width = e_plus - e_minus;
  const double lo = e_minus + 0.1 * width;
  const double hi = e_plus - 0.1 * width;
  ReflectionlessReport rep;
  rep.delta = delta;
  rep.verdict = true;
  const int m = c.dim();
  const Mat half = 0.5 * Mat::Identity(m, m);
  for (int k : k_list) {
    XiGrid g = xi_grid(c, k, lo, hi, grid_nodes, eps, XiTarget::XiOfG,
                       Side::Plus, opt, workers);
    double dev = 0.0;
    for (const Mat& v : g.values) dev = std::max(dev, opnorm(v - half));
    rep.sites.push_back(k);
    rep.max_deviation.push_back(dev);
    if (dev > delta) rep.verdict = false;
  }
  return rep;
}

double strong_reflectionless_gap(const JacobiCoefficients& c, double lambda,
                                 int k, double eps, const WeylOptions& opt) {
  Mat mp = weyl_pair(c, cplx(lambda, eps), k, opt).plus;
  Mat mm = weyl_pair(c, cplx(lambda, -eps), k, opt).minus;
  return opnorm(mp - mm);
}

cplx borg_branch_sqrt(cplx z, double e_minus, double e_plus) {
  return std::exp(0.5 * (std::log(z - e_minus) + std::log(z - e_plus)));
}

namespace {

double dist_to_interval(cplx z, double a, double b) {
  double x = z.real(), y = z.imag();
  double dx = x < a ? a - x : (x > b ? x - b : 0.0);
  return std::hypot(dx, y);
}

void check_off_cut(cplx z, double a, double b) {
  if (dist_to_interval(z, a, b) < 1e-12) throw OnCut();
}

}  // namespace

Mat borg_reference_g(cplx z, double e_minus, double e_plus, int m) {
  if (!(e_minus < e_plus)) throw BadInterval("E- < E+ required");
  check_off_cut(z, e_minus, e_plus);
  return (-1.0 / borg_branch_sqrt(z, e_minus, e_plus)) *
         Mat::Identity(m, m);
}

Mat borg_reference_M(cplx z, double e_minus, double e_plus, Side side,
                     int m) {
  if (!(e_minus < e_plus)) throw BadInterval("E- < E+ required");
  check_off_cut(z, e_minus, e_plus);
  double sgn = side == Side::Plus ? 1.0 : -1.0;
  cplx v = -0.5 * z + 0.25 * (e_minus + e_plus) +
           sgn * 0.5 * borg_branch_sqrt(z, e_minus, e_plus);
  return v * Mat::Identity(m, m);
}

double gamma_density(double lambda, double e_minus, double e_plus) {
  if (lambda <= e_minus || lambda >= e_plus) return 0.0;
  return std::sqrt((lambda - e_minus) * (e_plus - lambda)) / M_PI;
}

}  // namespace jborg
