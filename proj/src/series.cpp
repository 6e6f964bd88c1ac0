#include "jborg/series.hpp"

#include <algorithm>

#include "jborg/herglotz.hpp"

namespace jborg {

MatrixSeries MatrixSeries::operator+(const MatrixSeries& o) const {
  int lead = std::min(lead_, o.lead_);
  int order = std::min(order_, o.order_);
  MatrixSeries r(m_, lead, order);
  for (int n = lead; n <= order; ++n)
    r.coeff(n) = coeff_or_zero(n) + o.coeff_or_zero(n);
  return r;
}

MatrixSeries MatrixSeries::operator-(const MatrixSeries& o) const {
  return *this + (-o);
}

MatrixSeries MatrixSeries::operator-() const {
  MatrixSeries r(m_, lead_, order_);
  for (int n = lead_; n <= order_; ++n) r.coeff(n) = -coeff(n);
  return r;
}

MatrixSeries MatrixSeries::operator*(const MatrixSeries& o) const {
  // exact through min(J1 + l2, J2 + l1): the unknown tails of either factor
  // first contribute beyond that power
  int lead = lead_ + o.lead_;
  int order = std::min(order_ + o.lead_, o.order_ + lead_);
  MatrixSeries r(m_, lead, order);
  for (int i = lead_; i <= order_; ++i)
    for (int j = o.lead_; j <= o.order_; ++j) {
      int n = i + j;
      if (n > order) continue;
      r.coeff(n) += coeff(i) * o.coeff(j);
    }
  return r;
}

MatrixSeries MatrixSeries::inverse() const {
  const Mat& s0 = coeff(lead_);
  Eigen::PartialPivLU<Mat> lu(s0);
  if (std::abs(lu.determinant()) < 1e-300)
    throw SingularInversion("MatrixSeries: leading coefficient singular");
  Mat s0inv = lu.inverse();
  // S = S_l z^{-l} (I + T),  T_n = S_l^{-1} S_{l+n},  n >= 1
  int jt = order_ - lead_;  // T known through order jt
  std::vector<Mat> t(jt + 1, Mat::Zero(m_, m_));
  for (int n = 1; n <= jt; ++n) t[n] = s0inv * coeff(lead_ + n);
  // X = (I + T)^{-1}: X_0 = I, X_n = -sum_{j=1..n} T_j X_{n-j}
  std::vector<Mat> x(jt + 1, Mat::Zero(m_, m_));
  x[0] = Mat::Identity(m_, m_);
  for (int n = 1; n <= jt; ++n)
    for (int j = 1; j <= n; ++j) x[n] -= t[j] * x[n - j];
  // S^{-1} = X S_l^{-1} z^{l}
  MatrixSeries r(m_, -lead_, jt - lead_);
  for (int n = 0; n <= jt; ++n) r.coeff(n - lead_) = x[n] * s0inv;
  return r;
}

MatrixSeries MatrixSeries::derivative() const {
  MatrixSeries r(m_, lead_ + 1, order_ + 1);
  for (int n = lead_; n <= order_; ++n)
    r.coeff(n + 1) = static_cast<double>(-n) * coeff(n);
  return r;
}

MatrixSeries MatrixSeries::log_one_plus(const MatrixSeries& c) {
  if (c.lead() < 1)
    throw DimensionMismatch("log_one_plus: series must be O(z^{-1})");
  int J = c.order();
  MatrixSeries l(c.dim(), 1, J);
  MatrixSeries p = c;  // running power C^j
  double sign = 1.0;
  for (int j = 1;; ++j) {
    for (int n = p.lead(); n <= std::min(J, p.order()); ++n)
      l.coeff(n) += (sign / j) * p.coeff(n);
    if (p.lead() + c.lead() > J) break;
    p = p * c;
    sign = -sign;
  }
  return l;
}

MatrixSeries MatrixSeries::truncated(int new_order) const {
  MatrixSeries r(m_, lead_, std::min(order_, new_order));
  for (int n = r.lead(); n <= r.order(); ++n) r.coeff(n) = coeff(n);
  return r;
}

namespace {

// site lookup with WindowTooSmall on Forbidden-extension misses
const Mat& seq_at(const MatrixSeq& s, int k) {
  try {
    return s.at(k);
  } catch (const OutOfWindow&) {
    throw WindowTooSmall("series recursion reaches outside the window");
  }
}

}  // namespace

namespace {

// coefficient growth is bounded by (2C)^J; past J = 16 double precision
// cannot hold the low-order terms against it
void check_order(int J, const char* who) {
  if (J < 1) throw DimensionMismatch(std::string(who) + ": J >= 1 required");
  if (J > 16) throw DimensionMismatch(std::string(who) + ": order cap J = 16");
}

}  // namespace

MatrixSeries m_series(const JacobiCoefficients& c, int k, Side side, int J) {
  check_order(J, "m_series");
  const int m = c.dim();
  const int dir = side == Side::Plus ? 1 : -1;
  // dp[s][j] = m_{pm,j}(k + dir*s), computed for j <= J - s
  std::vector<std::vector<Mat>> dp(
      J + 1, std::vector<Mat>(J + 1, Mat::Zero(m, m)));
  for (int s = J; s >= 0; --s) {
    int site = k + dir * s;
    int jmax = J - s;
    if (jmax >= 1) dp[s][1] = -Mat::Identity(m, m);
    if (jmax >= 2) dp[s][2] = -seq_at(c.b(), site);
    const Mat& a = side == Side::Plus ? seq_at(c.a(), site)
                                      : seq_at(c.a(), site - 1);
    for (int j = 2; j < jmax; ++j) {
      Mat acc = seq_at(c.b(), site) * dp[s][j];
      for (int l = 1; l <= j - 1; ++l)
        acc -= a * dp[s + 1][j - l] * a * dp[s][l];
      dp[s][j + 1] = acc;
    }
  }
  MatrixSeries r(m, 1, J);
  for (int j = 1; j <= J; ++j) r.coeff(j) = dp[0][j];
  return r;
}

MatrixSeries M_series(const JacobiCoefficients& c, int k, Side side, int J) {
  check_order(J, "M_series");
  const int m = c.dim();
  if (side == Side::Plus) {
    // dp[s][j] = M_{+,j}(k+s), j <= J - s
    std::vector<std::vector<Mat>> dp(
        J + 1, std::vector<Mat>(J + 1, Mat::Zero(m, m)));
    for (int s = J; s >= 0; --s) {
      int site = k + s;
      int jmax = J - s;
      const Mat& a = seq_at(c.a(), site);
      Mat ainv = small_inverse(a);
      const Mat& bp = seq_at(c.b(), site + 1);
      if (jmax >= 1) dp[s][1] = -(a * a);
      if (jmax >= 2) dp[s][2] = -(a * bp * a);
      for (int j = 2; j < jmax; ++j) {
        Mat acc = a * bp * ainv * dp[s][j];
        for (int l = 1; l <= j - 1; ++l)
          acc -= a * dp[s + 1][j - l] * ainv * dp[s][l];
        dp[s][j + 1] = acc;
      }
    }
    MatrixSeries r(m, 1, J);
    for (int j = 1; j <= J; ++j) r.coeff(j) = dp[0][j];
    return r;
  }
  // minus side: dp[s][j] = M_{-,j}(k-s) for j in 0..J-s, plus the leading -Iz
  std::vector<std::vector<Mat>> dp(
      J + 1, std::vector<Mat>(J + 1, Mat::Zero(m, m)));
  for (int s = J; s >= 0; --s) {
    int site = k - s;
    int jmax = J - s;
    const Mat& am = seq_at(c.a(), site - 1);
    Mat aminv = small_inverse(am);
    if (jmax >= 0) dp[s][0] = seq_at(c.b(), site);
    if (jmax >= 1) dp[s][1] = am * am;
    if (jmax >= 2) dp[s][2] = am * seq_at(c.b(), site - 1) * am;
    for (int j = 2; j < jmax; ++j) {
      Mat acc = -seq_at(c.b(), site) * aminv * dp[s + 1][j] * am;
      for (int l = 0; l <= j; ++l)
        acc += dp[s][j - l] * aminv * dp[s + 1][l] * am;
      dp[s][j + 1] = acc;
    }
  }
  MatrixSeries r(m, -1, J);
  r.coeff(-1) = -Mat::Identity(m, m);
  for (int j = 0; j <= J; ++j) r.coeff(j) = dp[0][j];
  return r;
}

MatrixSeries g_series(const JacobiCoefficients& c, int k, int J) {
  check_order(J, "g_series");
  // (M_- - M_+) has lead -1; its inverse starts at z^{-1} and is exact
  // through order J + 2 given inputs through J, so J-term input suffices.
  MatrixSeries diff = M_series(c, k, Side::Minus, J) -
                      M_series(c, k, Side::Plus, J);
  return diff.inverse().truncated(J);
}

MatrixSeries s_series(const JacobiCoefficients& c, int k, int J) {
  check_order(J, "s_series");
  const int m = c.dim();
  MatrixSeries s(m, 1, J);
  s.coeff(1) = Mat::Identity(m, m);
  if (J == 1) return s;
  MatrixSeries g = g_series(c, k, J);
  // g = -z^{-1} (I + C),  C_n = -r_{n+1}
  MatrixSeries cc(m, 1, J - 1);
  for (int n = 1; n <= J - 1; ++n) cc.coeff(n) = -g.coeff(n + 1);
  MatrixSeries lg = MatrixSeries::log_one_plus(cc);
  // -d/dz ln g = z^{-1} I + sum_n n L_n z^{-(n+1)}
  for (int n = 1; n <= J - 1; ++n)
    s.coeff(n + 1) = static_cast<double>(n) * lg.coeff(n);
  return s;
}

namespace {

// Composite Simpson on a uniform grid of f-values (matrix-valued); an odd
// interval count is finished with a 3/8 rule on the last three cells.
Mat simpson(const std::vector<double>& x, const std::vector<Mat>& f) {
  const std::size_t n = x.size();
  const int m = static_cast<int>(f[0].rows());
  const double h = (x.back() - x.front()) / static_cast<double>(n - 1);
  Mat acc = Mat::Zero(m, m);
  std::size_t cells = n - 1;
  std::size_t simpson_end = cells % 2 == 0 ? cells : cells - 3;
  for (std::size_t i = 0; i + 2 <= simpson_end; i += 2)
    acc += (h / 3.0) * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
  if (cells % 2 != 0) {
    std::size_t i = cells - 3;
    acc += (3.0 * h / 8.0) * (f[i] + 3.0 * f[i + 1] + 3.0 * f[i + 2] +
                              f[i + 3]);
  }
  return acc;
}

}  // namespace

Mat trace_rhs(int j, const XiGrid& xi, double e_minus, double e_plus) {
  if (j < 1) throw DimensionMismatch("trace_rhs: j >= 1 required");
  if (xi.lambdas.size() < 16)
    throw GridTooCoarse("trace_rhs: need at least 16 lambda nodes");
  const int m = static_cast<int>(xi.values[0].rows());
  Mat lead = 0.5 *
             (std::pow(e_minus, j - 1) + std::pow(e_plus, j - 1)) *
             Mat::Identity(m, m);
  if (j == 1) return lead;
  std::vector<Mat> f(xi.lambdas.size());
  for (std::size_t i = 0; i < xi.lambdas.size(); ++i) {
    double w = std::pow(xi.lambdas[i], j - 2);
    f[i] = w * (Mat::Identity(m, m) - 2.0 * xi.values[i]);
  }
  return lead + 0.5 * (j - 1) * simpson(xi.lambdas, f);
}

}  // namespace jborg
