#include "jborg/weyl.hpp"

#include <algorithm>
#include <cmath>

namespace jborg {

namespace {

constexpr double kAxisGuard = 1e-8;

void check_off_axis(cplx z) {
  if (std::abs(z.imag()) < kAxisGuard) throw NearRealAxis();
}

// One downward Riccati sweep for m_plus: from the seed at site k+depth to
// site k, m(j-1) = -[A(j-1) m(j) A(j-1) + zI - B(j-1)]^{-1}.
Mat m_plus_sweep(const JacobiCoefficients& c, cplx z, int k, long depth,
                 const Mat& seed) {
  const int m = c.dim();
  Mat x = seed, t1(m, m), t2(m, m);
  for (long j = static_cast<long>(k) + depth; j > k; --j) {
    const Mat& aj = c.a().at(static_cast<int>(j) - 1);
    const Mat& bj = c.b().at(static_cast<int>(j) - 1);
    t1.noalias() = aj * x;
    t2.noalias() = t1 * aj;
    t2 -= bj;
    t2.diagonal().array() += z;
    small_inverse(t2, x);
    x = -x;
  }
  return x;
}

// Mirrored upward sweep for m_minus:
// m(j) = -[A(j-1) m(j-1) A(j-1) + zI - B(j)]^{-1}.
Mat m_minus_sweep(const JacobiCoefficients& c, cplx z, int k, long depth,
                  const Mat& seed) {
  const int m = c.dim();
  Mat x = seed, t1(m, m), t2(m, m);
  for (long j = static_cast<long>(k) - depth + 1; j <= k; ++j) {
    const Mat& aj = c.a().at(static_cast<int>(j) - 1);
    const Mat& bj = c.b().at(static_cast<int>(j));
    t1.noalias() = aj * x;
    t2.noalias() = t1 * aj;
    t2 -= bj;
    t2.diagonal().array() += z;
    small_inverse(t2, x);
    x = -x;
  }
  return x;
}

Mat m_sweep(const JacobiCoefficients& c, cplx z, int k, Side side, long depth,
            const Mat& seed) {
  return side == Side::Plus ? m_plus_sweep(c, z, k, depth, seed)
                            : m_minus_sweep(c, z, k, depth, seed);
}

// Depth-doubling Cauchy iteration; returns the converged value and depth.
std::pair<Mat, long> m_converged(const JacobiCoefficients& c, cplx z, int k,
                                 Side side, const WeylOptions& opt) {
  const int m = c.dim();
  const Mat seed = (-1.0 / z) * Mat::Identity(m, m);
  Mat prev = m_sweep(c, z, k, side, opt.depth0, seed);
  for (long d = 2 * opt.depth0; d <= opt.depth_cap; d *= 2) {
    Mat cur = m_sweep(c, z, k, side, d, seed);
    if (opnorm(cur - prev) < opt.tol) return {cur, d};
    prev = std::move(cur);
  }
  throw NoConvergence(opt.depth_cap);
}

// Direct Riccati iteration for M_pm with the asymptotic seeds.
Mat big_m_direct(const JacobiCoefficients& c, cplx z, int k, Side side,
                 const WeylOptions& opt) {
  const int m = c.dim();
  auto sweep = [&](long depth) -> Mat {
    Mat x(m, m), t1(m, m), t2(m, m);
    if (side == Side::Plus) {
      long kd = static_cast<long>(k) + depth;
      const Mat& ad = c.a().at(static_cast<int>(kd));
      x.noalias() = (-1.0 / z) * (ad * ad);
      // M(j-1) = A(j-1) [B(j) - zI - M(j)]^{-1} A(j-1)
      for (long j = kd; j > k; --j) {
        const Mat& aj = c.a().at(static_cast<int>(j) - 1);
        t2 = c.b().at(static_cast<int>(j)) - x;
        t2.diagonal().array() -= z;
        small_inverse(t2, t1);
        t2.noalias() = aj * t1;
        x.noalias() = t2 * aj;
      }
    } else {
      long kd = static_cast<long>(k) - depth;
      x = c.b().at(static_cast<int>(kd));
      x.diagonal().array() -= z;
      // M(j) = B(j) - zI - A(j-1) M(j-1)^{-1} A(j-1)
      for (long j = kd + 1; j <= k; ++j) {
        const Mat& aj = c.a().at(static_cast<int>(j) - 1);
        small_inverse(x, t1);
        t2.noalias() = aj * t1;
        t1.noalias() = t2 * aj;
        x = c.b().at(static_cast<int>(j)) - t1;
        x.diagonal().array() -= z;
      }
    }
    return x;
  };
  Mat prev = sweep(opt.depth0);
  for (long d = 2 * opt.depth0; d <= opt.depth_cap; d *= 2) {
    Mat cur = sweep(d);
    if (opnorm(cur - prev) < opt.tol) return cur;
    prev = std::move(cur);
  }
  throw NoConvergence(opt.depth_cap);
}

bool constant_tails(const JacobiCoefficients& c) {
  return c.a().extension() == Extension::ConstantTail &&
         c.b().extension() == Extension::ConstantTail;
}

// m_pm through the tail fixed point plus an exact finite recursion across
// the window. Valid for ConstantTail extensions only.
Mat m_fast(const JacobiCoefficients& c, cplx z, int k, Side side) {
  const int m = c.dim();
  Mat t1(m, m), t2(m, m);
  if (side == Side::Plus) {
    int jt = std::max(c.a().k_hi(), c.b().k_hi());
    Mat x = tail_m_fixed_point(c.a().at(jt), c.b().at(jt), z);
    for (int j = jt; j > k; --j) {
      const Mat& aj = c.a().at(j - 1);
      t1.noalias() = aj * x;
      t2.noalias() = t1 * aj;
      t2 -= c.b().at(j - 1);
      t2.diagonal().array() += z;
      small_inverse(t2, x);
      x = -x;
    }
    return x;
  }
  int jt = std::min(c.a().k_lo(), c.b().k_lo());
  Mat x = tail_m_fixed_point(c.a().at(jt), c.b().at(jt), z);
  for (int j = jt + 1; j <= k; ++j) {
    const Mat& aj = c.a().at(j - 1);
    t1.noalias() = aj * x;
    t2.noalias() = t1 * aj;
    t2 -= c.b().at(j);
    t2.diagonal().array() += z;
    small_inverse(t2, x);
    x = -x;
  }
  return x;
}

Mat small_to_big(const JacobiCoefficients& c, const Mat& m_small, cplx z,
                 int k, Side side) {
  if (side == Side::Plus) {
    // M_+ = -m_+^{-1} - zI + B(k)
    Mat inv = small_inverse(m_small);
    Mat out = -inv + c.b().at(k);
    out.diagonal().array() -= z;
    return out;
  }
  return small_inverse(m_small);  // M_- = m_-^{-1}
}

double riccati_residual_small(const JacobiCoefficients& c, cplx z, int k,
                              Side side, const Mat& mk, const Mat& m_other) {
  // Plus: A(k) m(k+1) A(k) m(k) + (zI-B(k)) m(k) + I with m_other = m(k+1).
  // Minus: A(k-1) m(k-1) A(k-1) m(k) + (zI-B(k)) m(k) + I, m_other = m(k-1).
  const Mat& a = side == Side::Plus ? c.a().at(k) : c.a().at(k - 1);
  Mat r = a * m_other * a * mk - c.b().at(k) * mk + z * mk;
  r.diagonal().array() += 1.0;
  return opnorm(r);
}

}  // namespace

Mat tail_m_fixed_point(const Mat& a, const Mat& b, cplx z) {
  const int m = static_cast<int>(a.rows());
  Mat ainv = small_inverse(a);
  Mat t = Mat::Zero(2 * m, 2 * m);
  Mat zb = -b;
  zb.diagonal().array() += z;
  t.topLeftCorner(m, m).noalias() = ainv * zb;
  t.topRightCorner(m, m) = -Mat::Identity(m, m);
  t.bottomLeftCorner(m, m) = Mat::Identity(m, m);

  Eigen::ComplexEigenSolver<Mat> es(t);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("transfer-matrix eigendecomposition failed");
  std::vector<int> inside;
  for (int i = 0; i < 2 * m; ++i) {
    double r = std::abs(es.eigenvalues()(i));
    if (r < 1.0 - 1e-12) inside.push_back(i);
  }
  if (static_cast<int>(inside.size()) != m)
    throw NumericalFailure("transfer matrix has no clean unit-circle split");
  Mat top(m, m), bottom(m, m);
  for (int c0 = 0; c0 < m; ++c0) {
    top.col(c0) = es.eigenvectors().col(inside[c0]).head(m);
    bottom.col(c0) = es.eigenvectors().col(inside[c0]).tail(m);
  }
  Eigen::PartialPivLU<Mat> lu(bottom);
  if (std::abs(lu.determinant()) < 1e-250)
    throw NumericalFailure("contracting subspace degenerate at this z");
  // m_tail = -U V^{-1} A^{-1}
  return -(top * lu.inverse()) * ainv;
}

FundamentalSolutions fundamental_solutions(const JacobiCoefficients& c,
                                           cplx z, int k0, int lo, int hi) {
  if (lo > k0 || hi < k0 + 1)
    throw WindowTooSmall("fundamental_solutions: range must cover k0, k0+1");
  const int m = c.dim();
  const int n = hi - lo + 1;
  std::vector<Mat> th(n), ph(n);
  auto idx = [&](int k) { return k - lo; };
  th[idx(k0)] = Mat::Identity(m, m);
  th[idx(k0 + 1)] = Mat::Zero(m, m);
  ph[idx(k0)] = Mat::Zero(m, m);
  ph[idx(k0 + 1)] = Mat::Identity(m, m);
  // rightward: psi(j+1) = A(j)^{-1} [(z-B(j)) psi(j) - A(j-1) psi(j-1)]
  for (int j = k0 + 1; j < hi; ++j) {
    Mat ainv = small_inverse(c.a().at(j));
    Mat zb = -c.b().at(j);
    zb.diagonal().array() += z;
    const Mat& am = c.a().at(j - 1);
    th[idx(j + 1)] = ainv * (zb * th[idx(j)] - am * th[idx(j - 1)]);
    ph[idx(j + 1)] = ainv * (zb * ph[idx(j)] - am * ph[idx(j - 1)]);
  }
  // leftward: psi(j-1) = A(j-1)^{-1} [(z-B(j)) psi(j) - A(j) psi(j+1)]
  for (int j = k0; j > lo; --j) {
    Mat ainv = small_inverse(c.a().at(j - 1));
    Mat zb = -c.b().at(j);
    zb.diagonal().array() += z;
    const Mat& ap = c.a().at(j);
    th[idx(j - 1)] = ainv * (zb * th[idx(j)] - ap * th[idx(j + 1)]);
    ph[idx(j - 1)] = ainv * (zb * ph[idx(j)] - ap * ph[idx(j + 1)]);
  }
  FundamentalSolutions fs;
  fs.z = z;
  fs.k0 = k0;
  fs.theta = MatrixSeq(lo, std::move(th), Extension::Forbidden);
  fs.phi = MatrixSeq(lo, std::move(ph), Extension::Forbidden);
  return fs;
}

WeylValue weyl_m_small(const JacobiCoefficients& c, cplx z, int k, Side side,
                       const WeylOptions& opt) {
  if (!opt.allow_real_resolvent) check_off_axis(z);
  WeylValue w;
  w.z = z;
  w.k = k;
  w.side = side;
  w.kind = WeylKind::SmallM;
  auto [mk, depth] = m_converged(c, z, k, side, opt);
  int other = side == Side::Plus ? k + 1 : k - 1;
  auto [mo, d2] = m_converged(c, z, other, side, opt);
  w.value = mk;
  w.depth = std::max(depth, d2);
  w.residual = riccati_residual_small(c, z, k, side, mk, mo);
  return w;
}

WeylValue weyl_m_big(const JacobiCoefficients& c, cplx z, int k, Side side,
                     const WeylOptions& opt) {
  if (!opt.allow_real_resolvent) check_off_axis(z);
  WeylValue w = weyl_m_small(c, z, k, side, opt);
  w.kind = WeylKind::BigM;
  double smin = w.value.jacobiSvd().singularValues().minCoeff();
  if (smin < 1e-13 * std::max(1.0, opnorm(w.value)))
    throw SingularInversion("m_pm numerically singular (near a pole of M)");
  Mat big = small_to_big(c, w.value, z, k, side);
  // Riccati residual against an independently converged M(k-1).
  WeylValue wm1 = weyl_m_small(c, z, k - 1, side, opt);
  Mat big_m1 = small_to_big(c, wm1.value, z, k - 1, side);
  const Mat& am = c.a().at(k - 1);
  Mat r = big + am * small_inverse(big_m1) * am - c.b().at(k);
  r.diagonal().array() += z;
  w.residual = opnorm(r);
  w.value = big;
  w.cross_residual = opnorm(big - big_m_direct(c, z, k, side, opt));
  w.depth = std::max(w.depth, wm1.depth);
  return w;
}

MPair weyl_pair(const JacobiCoefficients& c, cplx z, int k,
                const WeylOptions& opt) {
  if (!opt.allow_real_resolvent) check_off_axis(z);
  MPair p;
  if (opt.fast_tail && constant_tails(c)) {
    try {
      p.plus = small_to_big(c, m_fast(c, z, k, Side::Plus), z, k, Side::Plus);
      p.minus =
          small_to_big(c, m_fast(c, z, k, Side::Minus), z, k, Side::Minus);
      return p;
    } catch (const NumericalFailure&) {
      // fall through to the reference iteration
    }
  }
  p.plus = small_to_big(c, m_converged(c, z, k, Side::Plus, opt).first, z, k,
                        Side::Plus);
  p.minus = small_to_big(c, m_converged(c, z, k, Side::Minus, opt).first, z,
                         k, Side::Minus);
  return p;
}

Mat m_finite(const JacobiCoefficients& c, cplx z, int k0, int N) {
  if (N == k0) throw WindowTooSmall("m_finite: N must differ from k0");
  check_off_axis(z);
  // The Dirichlet section at N makes M_N a finite Riccati continued
  // fraction; running it directly avoids the exponential conditioning
  // spread of the raw theta/phi quotient (see m_finite_frame).
  const int m = c.dim();
  Mat x(m, m), t1(m, m), t2(m, m);
  if (N > k0) {
    x.setZero();  // M(N-1) = 0
    for (int j = N - 1; j > k0; --j) {
      const Mat& aj = c.a().at(j - 1);
      t2 = c.b().at(j) - x;
      t2.diagonal().array() -= z;
      small_inverse(t2, t1);
      t2.noalias() = aj * t1;
      x.noalias() = t2 * aj;
    }
  } else {
    x = c.b().at(N + 1);  // M(N+1) = B(N+1) - z
    x.diagonal().array() -= z;
    for (int j = N + 2; j <= k0; ++j) {
      const Mat& aj = c.a().at(j - 1);
      small_inverse(x, t1);
      t2.noalias() = aj * t1;
      t1.noalias() = t2 * aj;
      x = c.b().at(j) - t1;
      x.diagonal().array() -= z;
    }
  }
  if (!x.allFinite()) throw SingularPhi(N);
  return x;
}

Mat m_finite_frame(const JacobiCoefficients& c, cplx z, int k0, int N) {
  if (N == k0) throw WindowTooSmall("m_finite_frame: N must differ from k0");
  check_off_axis(z);
  const int m = c.dim();
  Mat th_prev = Mat::Identity(m, m), th_cur = Mat::Zero(m, m);
  Mat ph_prev = Mat::Zero(m, m), ph_cur = Mat::Identity(m, m);
  // pair (prev, cur) sits at sites (j-1, j), starting at (k0, k0+1);
  // rescaling by the largest entry keeps the frame in range and cancels in
  // the quotient below
  auto rescale = [&] {
    double s = std::max(
        std::max(th_prev.cwiseAbs().maxCoeff(), th_cur.cwiseAbs().maxCoeff()),
        std::max(ph_prev.cwiseAbs().maxCoeff(), ph_cur.cwiseAbs().maxCoeff()));
    if (s > 1e120) {
      th_prev /= s;
      ph_prev /= s;
      th_cur /= s;
      ph_cur /= s;
    }
  };
  if (N > k0) {
    for (int j = k0 + 1; j < N; ++j) {
      Mat ainv = small_inverse(c.a().at(j));
      Mat zb = -c.b().at(j);
      zb.diagonal().array() += z;
      const Mat& am = c.a().at(j - 1);
      Mat th_next = ainv * (zb * th_cur - am * th_prev);
      Mat ph_next = ainv * (zb * ph_cur - am * ph_prev);
      th_prev = std::move(th_cur);
      ph_prev = std::move(ph_cur);
      th_cur = std::move(th_next);
      ph_cur = std::move(ph_next);
      rescale();
    }
  } else {
    for (int j = k0; j > N; --j) {
      Mat ainv = small_inverse(c.a().at(j - 1));
      Mat zb = -c.b().at(j);
      zb.diagonal().array() += z;
      const Mat& ap = c.a().at(j);
      Mat th_new = ainv * (zb * th_prev - ap * th_cur);
      Mat ph_new = ainv * (zb * ph_prev - ap * ph_cur);
      th_cur = std::move(th_prev);
      ph_cur = std::move(ph_prev);
      th_prev = std::move(th_new);
      ph_prev = std::move(ph_new);
      rescale();
    }
  }
  const Mat& thN = N > k0 ? th_cur : th_prev;
  const Mat& phN = N > k0 ? ph_cur : ph_prev;
  Eigen::JacobiSVD<Mat> svd(phN, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double smax = svd.singularValues().maxCoeff();
  if (svd.singularValues().minCoeff() <= 1e-150 * smax) throw SingularPhi(N);
  return c.a().at(k0) * svd.solve(thN);
}

Mat weyl_solution(const FundamentalSolutions& fs, const JacobiCoefficients& c,
                  const Mat& m_big, int k) {
  return fs.theta.at(k) -
         fs.phi.at(k) * small_inverse(c.a().at(fs.k0)) * m_big;
}

Mat greens_full(const JacobiCoefficients& c, cplx z, int k, int l,
                const WeylOptions& opt) {
  check_off_axis(z);
  MPair p = weyl_pair(c, z, l, opt);
  Mat g = small_inverse(p.minus - p.plus);
  if (k == l) return g;
  FundamentalSolutions fs =
      fundamental_solutions(c, z, l, std::min(l, k), std::max({l + 1, k}));
  const Mat& mb = l <= k ? p.plus : p.minus;
  return weyl_solution(fs, c, mb, k) * g;
}

Mat greens_halfline(const JacobiCoefficients& c, cplx z, int k, int l, int k0,
                    Side side, const WeylOptions& opt) {
  check_off_axis(z);
  if (side == Side::Plus) {
    if (k < k0) throw WrongSide(k);
    if (l < k0) throw WrongSide(l);
    int ref = k0 - 1;
    int hi = std::max({k, l, ref + 1});
    FundamentalSolutions fz = fundamental_solutions(c, z, ref, ref, hi);
    FundamentalSolutions fzb =
        fundamental_solutions(c, std::conj(z), ref, ref, hi);
    Mat ainv = small_inverse(c.a().at(ref));
    Mat mp = small_to_big(
        c, m_converged(c, z, ref, Side::Plus, opt).first, z, ref, Side::Plus);
    Mat mp_bar = small_to_big(
        c, m_converged(c, std::conj(z), ref, Side::Plus, opt).first,
        std::conj(z), ref, Side::Plus);
    if (l <= k) {
      Mat psi = weyl_solution(fz, c, mp, k);
      return -psi * ainv * fzb.phi.at(l).adjoint();
    }
    Mat psi_bar = weyl_solution(fzb, c, mp_bar, l);
    return -fz.phi.at(k) * ainv * psi_bar.adjoint();
  }
  if (k > k0) throw WrongSide(k);
  if (l > k0) throw WrongSide(l);
  int ref = k0 + 1;
  int lo = std::min({k, l, ref});
  FundamentalSolutions fz = fundamental_solutions(c, z, ref, lo, ref + 1);
  FundamentalSolutions fzb =
      fundamental_solutions(c, std::conj(z), ref, lo, ref + 1);
  Mat ainv = small_inverse(c.a().at(ref));
  Mat mm = small_to_big(c, m_converged(c, z, ref, Side::Minus, opt).first, z,
                        ref, Side::Minus);
  Mat mm_bar = small_to_big(
      c, m_converged(c, std::conj(z), ref, Side::Minus, opt).first,
      std::conj(z), ref, Side::Minus);
  if (l <= k) {
    Mat psi_bar = weyl_solution(fzb, c, mm_bar, l);
    return fz.phi.at(k) * ainv * psi_bar.adjoint();
  }
  Mat psi = weyl_solution(fz, c, mm, k);
  return psi * ainv * fzb.phi.at(l).adjoint();
}

Mat BigWeylMatrix::assemble() const {
  const int m = static_cast<int>(m11.rows());
  Mat out(2 * m, 2 * m);
  out.topLeftCorner(m, m) = m11;
  out.topRightCorner(m, m) = m12;
  out.bottomLeftCorner(m, m) = m21;
  out.bottomRightCorner(m, m) = m22;
  return out;
}

BigWeylMatrix big_weyl(const JacobiCoefficients& c, cplx z, int k,
                       const WeylOptions& opt) {
  MPair p = weyl_pair(c, z, k, opt);
  BigWeylMatrix w;
  w.z = z;
  w.k = k;
  Mat g = small_inverse(p.minus - p.plus);
  Mat s = p.minus + p.plus;
  w.m11 = g;
  w.m12 = 0.5 * (g * s);
  w.m21 = 0.5 * (s * g);
  w.m22 = p.plus * g * p.minus;
  w.m22_gap = opnorm(w.m22 - p.minus * g * p.plus);
  return w;
}

}  // namespace jborg
