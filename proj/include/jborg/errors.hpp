#pragma once

#include <stdexcept>
#include <string>

namespace jborg {

// Base class for all library errors. Site-tagged errors carry the lattice
// index that triggered them.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct SiteError : Error {
  int site;
  SiteError(const std::string& what, int k)
      : Error(what + " at site k=" + std::to_string(k)), site(k) {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};
struct OutOfWindow : SiteError {
  explicit OutOfWindow(int k) : SiteError("index outside sequence window", k) {}
};
struct WindowTooSmall : Error {
  explicit WindowTooSmall(const std::string& msg) : Error(msg) {}
};

struct NotPositiveDefinite : SiteError {
  explicit NotPositiveDefinite(int k)
      : SiteError("matrix not positive definite", k) {}
};
struct NotHermitian : SiteError {
  explicit NotHermitian(int k) : SiteError("matrix not Hermitian", k) {}
};

struct SingularA : SiteError {
  explicit SingularA(int k) : SiteError("singular off-diagonal block A", k) {}
};
struct NoConvergence : Error {
  long depth_max;
  explicit NoConvergence(long depth)
      : Error("Weyl iteration did not converge by depth " +
              std::to_string(depth)),
        depth_max(depth) {}
};
struct NearRealAxis : Error {
  NearRealAxis()
      : Error("spectral parameter within 1e-8 of the real axis; use "
              "boundary_value with an explicit smoothing offset") {}
};
struct SingularInversion : Error {
  explicit SingularInversion(const std::string& msg) : Error(msg) {}
};
struct SingularPhi : SiteError {
  explicit SingularPhi(int k) : SiteError("singular phi(z,N,k0)", k) {}
};
struct WrongSide : SiteError {
  explicit WrongSide(int k) : SiteError("site on the wrong half-line", k) {}
};

struct GridTooCoarse : Error {
  explicit GridTooCoarse(const std::string& msg) : Error(msg) {}
};
struct LogBranchFailure : Error {
  explicit LogBranchFailure(const std::string& msg) : Error(msg) {}
};
struct OnCut : Error {
  OnCut() : Error("spectral parameter on the interval [E-,E+]") {}
};

struct Breakdown : SiteError {
  explicit Breakdown(int k) : SiteError("block Lanczos breakdown", k) {}
};

struct NotDiagonalPositive : SiteError {
  explicit NotDiagonalPositive(int k)
      : SiteError("rho not diagonal with positive entries", k) {}
};
struct SingularChi : SiteError {
  explicit SingularChi(int k) : SiteError("chi numerically singular", k) {}
};
struct PositivityFail : SiteError {
  explicit PositivityFail(int k)
      : SiteError("rho*chi^+ or chi*rho not positive definite", k) {}
};
struct SingularRho : SiteError {
  explicit SingularRho(int k) : SiteError("rho numerically singular", k) {}
};
struct SingularTransform : Error {
  explicit SingularTransform(const std::string& msg) : Error(msg) {}
};
struct ZeroEnergy : Error {
  ZeroEnergy() : Error("supersymmetric pairing undefined at z = 0") {}
};
struct BadInterval : Error {
  explicit BadInterval(const std::string& msg) : Error(msg) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};
struct NumericalFailure : Error {
  explicit NumericalFailure(const std::string& msg) : Error(msg) {}
};

}  // namespace jborg
