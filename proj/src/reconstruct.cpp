#include "jborg/reconstruct.hpp"

#include <algorithm>

namespace jborg {

Mat OrthoPolySystem::eval_poly(int k, cplx z) const {
  const auto& cs = poly_coeffs.at(k);
  const int m = static_cast<int>(cs[0].rows());
  Mat acc = Mat::Zero(m, m);
  cplx zp = 1.0;
  for (const Mat& c : cs) {
    acc += zp * c;
    zp *= z;
  }
  return acc;
}

MatrixMeasure spectral_measure_halfline(const JacobiCoefficients& c, int k0,
                                        Side side, int N) {
  if (N < 1) throw WindowTooSmall("spectral_measure_halfline: N >= 1");
  const int m = c.dim();
  TruncatedOperator t = side == Side::Plus
                            ? truncate_jacobi(c, k0, k0 + N - 1)
                            : truncate_jacobi(c, k0 - N + 1, k0);
  Eigen::SelfAdjointEigenSolver<Mat> es(t.dense());
  if (es.info() != Eigen::Success)
    throw NumericalFailure("eigendecomposition failed in spectral measure");
  const int row0 = side == Side::Plus ? 0 : (N - 1) * m;  // block of site k0
  MatrixMeasure mu;
  mu.normalized = true;
  mu.nodes.resize(static_cast<std::size_t>(N) * m);
  mu.weights.resize(mu.nodes.size());
  for (int i = 0; i < N * m; ++i) {
    mu.nodes[i] = es.eigenvalues()(i);
    Vec u = es.eigenvectors().col(i).segment(row0, m);
    mu.weights[i] = u * u.adjoint();
  }
  double scale = std::max(std::abs(mu.nodes.front()), std::abs(mu.nodes.back()));
  mu.merge_duplicates(1e-12 * std::max(1.0, scale));
  return mu;
}

OrthoPolySystem block_lanczos(const MatrixMeasure& measure, int n_steps,
                              double breakdown_tol) {
  const std::size_t nn = measure.nodes.size();
  if (nn == 0) throw DimensionMismatch("block_lanczos: empty measure");
  const int m = static_cast<int>(measure.weights[0].rows());
  if (measure.normalized) {
    if (opnorm(measure.total_mass() - Mat::Identity(m, m)) > 1e-8)
      throw DimensionMismatch("block_lanczos: measure not normalized");
  } else {
    throw DimensionMismatch("block_lanczos: normalized measure required");
  }

  // polynomial values at the nodes, three generations
  std::vector<Mat> p_prev(nn, Mat::Zero(m, m));
  std::vector<Mat> p_cur(nn, Mat::Identity(m, m));
  std::vector<Mat> r(nn, Mat(m, m));

  std::vector<std::vector<Mat>> coeff_prev, coeff_cur;
  coeff_cur.push_back({Mat::Identity(m, m)});  // P_0 = I

  OrthoPolySystem sys;
  sys.measure = measure;
  sys.poly_coeffs.push_back(coeff_cur.back());

  std::vector<Mat> as, bs;
  Mat a_prev;  // a_{k-1}

  for (int k = 0; k < n_steps; ++k) {
    // b_k = sum λ P_k W P_k^*
    Mat bk = Mat::Zero(m, m);
    for (std::size_t i = 0; i < nn; ++i)
      bk += measure.nodes[i] * p_cur[i] * measure.weights[i] *
            p_cur[i].adjoint();
    bk = hermitize(bk);
    bs.push_back(bk);

    // R = (λ - b_k) P_k - a_{k-1} P_{k-1}
    for (std::size_t i = 0; i < nn; ++i) {
      r[i] = measure.nodes[i] * p_cur[i] - bk * p_cur[i];
      if (k > 0) r[i] -= a_prev * p_prev[i];
    }
    Mat gram = Mat::Zero(m, m);
    for (std::size_t i = 0; i < nn; ++i)
      gram += r[i] * measure.weights[i] * r[i].adjoint();
    gram = hermitize(gram);
    if (min_eigenvalue(gram) <= breakdown_tol * std::max(1.0, opnorm(gram)))
      throw Breakdown(k);
    Mat ak = psd_sqrt(gram);
    Mat ak_inv = small_inverse(ak);
    as.push_back(ak);

    for (std::size_t i = 0; i < nn; ++i) {
      Mat next = ak_inv * r[i];
      p_prev[i] = std::move(p_cur[i]);
      p_cur[i] = std::move(next);
    }

    // coefficient bookkeeping: P_{k+1} = a_k^{-1} [(z - b_k) P_k - a_{k-1} P_{k-1}]
    std::vector<Mat> cn(coeff_cur.back().size() + 1, Mat::Zero(m, m));
    const auto& ck = coeff_cur.back();
    for (std::size_t j = 0; j < ck.size(); ++j) {
      cn[j + 1] += ck[j];
      cn[j] -= bk * ck[j];
    }
    if (k > 0) {
      const auto& cp = coeff_prev.back();
      for (std::size_t j = 0; j < cp.size(); ++j) cn[j] -= a_prev * cp[j];
    }
    for (Mat& c : cn) c = ak_inv * c;
    coeff_prev.push_back(coeff_cur.back());
    coeff_cur.push_back(cn);
    sys.poly_coeffs.push_back(cn);

    a_prev = ak;
  }

  sys.recovered_a = MatrixSeq(0, std::move(as), Extension::Forbidden);
  sys.recovered_b = MatrixSeq(0, std::move(bs), Extension::Forbidden);
  return sys;
}

RecoveredCoefficients map_to_lattice(const OrthoPolySystem& sys, int k0,
                                     Side side) {
  const int na = sys.recovered_a.size();
  const int nb = sys.recovered_b.size();
  std::vector<Mat> av(na), bv(nb);
  if (side == Side::Plus) {
    for (int k = 0; k < na; ++k) av[k] = sys.recovered_a.at(k);
    for (int k = 0; k < nb; ++k) bv[k] = sys.recovered_b.at(k);
    return {MatrixSeq(k0, std::move(av), Extension::Forbidden),
            MatrixSeq(k0, std::move(bv), Extension::Forbidden)};
  }
  // minus side: b_k sits at k0-k, a_k couples sites k0-k-1 <-> k0-k
  for (int k = 0; k < na; ++k) av[na - 1 - k] = sys.recovered_a.at(k);
  for (int k = 0; k < nb; ++k) bv[nb - 1 - k] = sys.recovered_b.at(k);
  return {MatrixSeq(k0 - na, std::move(av), Extension::Forbidden),
          MatrixSeq(k0 - nb + 1, std::move(bv), Extension::Forbidden)};
}

double poly_solution_identity(const JacobiCoefficients& c, int k0, cplx z,
                              int k, int N) {
  if (k >= N) throw WindowTooSmall("poly_solution_identity: need k < N");
  OrthoPolySystem plus =
      block_lanczos(spectral_measure_halfline(c, k0, Side::Plus, N), k + 1);
  OrthoPolySystem minus =
      block_lanczos(spectral_measure_halfline(c, k0, Side::Minus, N), k + 1);
  FundamentalSolutions fs_p =
      fundamental_solutions(c, z, k0 - 1, k0 - 1, std::max(k0 + k, k0));
  FundamentalSolutions fs_m =
      fundamental_solutions(c, z, k0, std::min(k0 - k, k0), k0 + 1);
  double rp = (plus.eval_poly(k, z) - fs_p.phi.at(k0 + k)).norm();
  double rm = (minus.eval_poly(k, z) - fs_m.theta.at(k0 - k)).norm();
  return std::max(rp, rm);
}

}  // namespace jborg
