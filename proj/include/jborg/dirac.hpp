#pragma once

#include "jborg/herglotz.hpp"
#include "jborg/weyl.hpp"

namespace jborg {

// Validated coefficient pair (rho, chi) of a supersymmetric Dirac difference
// operator D = [[0, E*], [E, 0]], E = rho^- S^- + chi: rho diagonal positive,
// chi invertible, rho*chi^+ and chi*rho positive definite, uniformly bounded.
class DiracCoefficients {
 public:
  DiracCoefficients() = default;
  int dim() const { return rho_.dim(); }
  const MatrixSeq& rho() const { return rho_; }
  const MatrixSeq& chi() const { return chi_; }
  double bound() const { return bound_; }

  friend DiracCoefficients validate_dirac(const MatrixSeq& rho,
                                          const MatrixSeq& chi, double tol);

 private:
  MatrixSeq rho_, chi_;
  double bound_ = 0.0;
};

DiracCoefficients validate_dirac(const MatrixSeq& rho, const MatrixSeq& chi,
                                 double tol = 1e-12);

// The two nonnegative Jacobi factors H1 = E*E, H2 = E E*.
struct SusyFactors {
  JacobiCoefficients h1, h2;
};
SusyFactors factorize_susy(const DiracCoefficients& d);

// Window section of D with E_fin mapping the window into itself (the
// dangling rho coupling at the left edge is dropped), so that
// D_fin^2 = diag(E_fin^* E_fin, E_fin E_fin^*) holds exactly.
class DiracTruncation {
 public:
  DiracTruncation(int k_lo, std::vector<Mat> chi_diag,
                  std::vector<Mat> rho_sub)
      : k_lo_(k_lo), chi_(std::move(chi_diag)), rho_(std::move(rho_sub)) {}

  int k_lo() const { return k_lo_; }
  int sites() const { return static_cast<int>(chi_.size()); }
  int dim() const { return static_cast<int>(chi_[0].rows()); }

  Mat e_dense() const;  // lower block-bidiagonal mN x mN
  Mat dense() const;    // [[0, E*], [E, 0]], 2mN x 2mN

  // Direct spectrum through the bandwidth-m interleaved ordering.
  std::vector<double> spectrum() const;

 private:
  int k_lo_;
  std::vector<Mat> chi_;  // chi(k) on the diagonal of E
  std::vector<Mat> rho_;  // rho(k) coupling site k -> k+1 row
};

DiracTruncation truncate_dirac(const DiracCoefficients& d, int k_lo,
                               int k_hi);

// Window matrix of S_rho + X for arbitrary (not necessarily validated)
// sequences; used by the normal-form conjugation identity.
Mat dirac_window_dense(const MatrixSeq& rho, const MatrixSeq& chi, int k_lo,
                       int k_hi);

// Finite spectrum estimate of D through the supersymmetric image
// +-sqrt(sigma(H1 Dirichlet truncation)); avoids the in-gap edge modes of
// the open window section.
std::vector<double> dirac_spectrum_susy(const DiracCoefficients& d, int k_lo,
                                        int k_hi);

// Normal form: a self-adjoint invertible rho(k) sequence is
// rotated to diagonal positive by U(rho,k) = diag(e(k)Q(k), e(k)Q(k-1)).
struct NormalForm {
  int k_lo = 0;
  std::vector<Mat> u;  // 2m x 2m unitary per site
  MatrixSeq rho_hat, chi_hat;
};
NormalForm normal_form(const MatrixSeq& rho, const MatrixSeq& chi,
                       double tol = 1e-12);

enum class DiracRoute { H1, H2 };

// Dirac Weyl matrices from the Jacobi factors:
//   H1 route: M^D_pm(z,k) = -z^{-1} rho + z^{-1} rho^{-1/2} M^{H1}_pm(z^2,k) rho^{-1/2}
//   H2 route: M^D_pm(z,k) = -z rho^{-1} - z rho^{-1/2} [chi^{-1} M^{H2}_pm(z^2,k) chi^{-*} - I]^{-1} rho^{-1/2}
// The cross-route gap is recorded in the residual field.
WeylValue dirac_weyl(const DiracCoefficients& d, cplx z, int k, Side side,
                     DiracRoute route, const WeylOptions& opt = {});

BigWeylMatrix dirac_big_weyl(const DiracCoefficients& d, cplx z, int k,
                             const WeylOptions& opt = {});

// Upsilon^D grid: (1/pi) Im log M^D(lambda + i eps, k).
XiGrid upsilon_dirac_grid(const DiracCoefficients& d, int k, double lo,
                          double hi, int nodes, double eps,
                          const WeylOptions& opt = {}, int workers = 0);

// Member of the 2^m-fold isospectral Borg family:
//   rho_j = (sqrt(E+) - eps_j sqrt(E-))/2, chi_j = (sqrt(E+) + eps_j sqrt(E-))/2.
struct BorgFamilyMember {
  std::vector<int> signs;
  Mat rho_value, chi_value;
  DiracCoefficients coeffs;
};
BorgFamilyMember borg_family(double e_minus, double e_plus,
                             const std::vector<int>& signs, int k_lo = -1,
                             int k_hi = 1);

// Supersymmetric eigenvector pairing at finite level: from an eigenvector of
// E*E (which == 1) or EE* (which == 2) at energy z^2, the paired eigenvector
// of D_fin at z, plus the residual |D U - z U|.
struct SusyPair {
  Vec u1, u2;
  double residual;
};
SusyPair susy_eigen_map(const Mat& e_fin, const Vec& u, int which, cplx z);

}  // namespace jborg
