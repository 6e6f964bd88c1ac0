#include "jborg/instances.hpp"

#include <random>

namespace jborg {

std::uint64_t Rng::next_u64() {
  // splitmix64; self-contained so streams never depend on libstdc++ details
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

cplx Rng::unit_complex() { return {uniform(-1, 1), uniform(-1, 1)}; }

Mat Rng::hermitian(int m, double amp) {
  Mat x(m, m);
  for (int i = 0; i < m; ++i) {
    x(i, i) = amp * uniform(-1, 1);
    for (int j = i + 1; j < m; ++j) {
      cplx v = 0.5 * amp * unit_complex();
      x(i, j) = v;
      x(j, i) = std::conj(v);
    }
  }
  return x;
}

Mat Rng::unitary(int m) {
  Mat x(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) x(i, j) = unit_complex();
  Eigen::HouseholderQR<Mat> qr(x);
  return qr.householderQ() * Mat::Identity(m, m);
}

JacobiCoefficients free_jacobi(int m, int k_lo, int k_hi) {
  return validate_jacobi(
      MatrixSeq::constant(Mat::Identity(m, m), k_lo, k_hi),
      MatrixSeq::constant(Mat::Zero(m, m), k_lo, k_hi));
}

JacobiCoefficients borg_jacobi(double e_minus, double e_plus, int m, int k_lo,
                               int k_hi) {
  if (!(e_minus < e_plus)) throw BadInterval("borg_jacobi: E- < E+");
  Mat a = 0.25 * (e_plus - e_minus) * Mat::Identity(m, m);
  Mat b = 0.5 * (e_minus + e_plus) * Mat::Identity(m, m);
  return validate_jacobi(MatrixSeq::constant(a, k_lo, k_hi),
                         MatrixSeq::constant(b, k_lo, k_hi));
}

JacobiCoefficients random_jacobi(int m, std::uint64_t seed, double amp,
                                 int k_lo, int k_hi) {
  Rng rng(seed);
  std::vector<Mat> av, bv;
  for (int k = k_lo; k <= k_hi; ++k) {
    Mat h = rng.hermitian(m, amp);
    // keep A(k) safely positive definite
    Mat a = Mat::Identity(m, m) + h;
    double lam = min_eigenvalue(a);
    if (lam < 0.2) a += (0.2 - lam) * Mat::Identity(m, m);
    av.push_back(a);
    bv.push_back(rng.hermitian(m, amp));
  }
  return validate_jacobi(MatrixSeq(k_lo, std::move(av)),
                         MatrixSeq(k_lo, std::move(bv)));
}

JacobiCoefficients random_periodic_jacobi(int m, std::uint64_t seed,
                                          double amp, int period, int k_lo,
                                          int k_hi) {
  Rng rng(seed);
  std::vector<Mat> ap, bp;
  for (int i = 0; i < period; ++i) {
    Mat h = rng.hermitian(m, amp);
    Mat a = Mat::Identity(m, m) + h;
    double lam = min_eigenvalue(a);
    if (lam < 0.2) a += (0.2 - lam) * Mat::Identity(m, m);
    ap.push_back(a);
    bp.push_back(rng.hermitian(m, amp));
  }
  std::vector<Mat> av, bv;
  for (int k = k_lo; k <= k_hi; ++k) {
    int r = (k - k_lo) % period;
    av.push_back(ap[r]);
    bv.push_back(bp[r]);
  }
  return validate_jacobi(
      MatrixSeq(k_lo, std::move(av), Extension::Periodic, period),
      MatrixSeq(k_lo, std::move(bv), Extension::Periodic, period));
}

DiracCoefficients random_dirac(int m, std::uint64_t seed, double amp,
                               int k_lo, int k_hi) {
  Rng rng(seed);
  std::vector<Mat> rv, cv;
  for (int k = k_lo; k <= k_hi; ++k) {
    // chi dominates rho channel-wise, so E stays uniformly invertible and
    // the finite-level susy pairing is well conditioned away from z = 0
    double r = rng.uniform(0.6, 0.75);
    Mat y = Mat::Identity(m, m) + rng.hermitian(m, amp);
    double lam = min_eigenvalue(y);
    if (lam < 0.85) y += (0.85 - lam) * Mat::Identity(m, m);
    rv.push_back(r * Mat::Identity(m, m));
    cv.push_back(y / r);
  }
  return validate_dirac(MatrixSeq(k_lo, std::move(rv)),
                        MatrixSeq(k_lo, std::move(cv)));
}

}  // namespace jborg
