#pragma once

#include <cstdint>

#include "jborg/dirac.hpp"
#include "jborg/jacobi.hpp"

namespace jborg {

// Deterministic RNG helpers: mt19937_64 bits mapped to doubles by hand so
// generated instances are reproducible byte for byte from the seed.
struct Rng {
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next_u64();
  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);   // [lo, hi)
  cplx unit_complex();                    // uniform in [-1,1]^2
  Mat hermitian(int m, double amp);       // random Hermitian, |entries| <= amp
  Mat unitary(int m);                     // Haar-ish via QR of a random matrix

 private:
  std::uint64_t state;
};

// Free coefficients A = I, B = 0 on [k_lo, k_hi].
JacobiCoefficients free_jacobi(int m, int k_lo = -64, int k_hi = 64);

// Constant Borg coefficients A = (E+-E-)/4 I, B = (E-+E+)/2 I.
JacobiCoefficients borg_jacobi(double e_minus, double e_plus, int m,
                               int k_lo = -64, int k_hi = 64);

// Random validated instance: A(k) = I + amp*Hermitian (kept PD),
// B(k) = amp*Hermitian, ConstantTail outside [k_lo, k_hi].
JacobiCoefficients random_jacobi(int m, std::uint64_t seed, double amp,
                                 int k_lo = -40, int k_hi = 40);

// Random periodic instance with period p starting at k_lo.
JacobiCoefficients random_periodic_jacobi(int m, std::uint64_t seed,
                                          double amp, int period,
                                          int k_lo = -40, int k_hi = 40);

// Random valid Dirac instance: rho(k) = r(k) I (scalar positive), chi(k)
// Hermitian positive definite / r(k), so the positivity requirements hold
// with genuinely non-diagonal chi.
DiracCoefficients random_dirac(int m, std::uint64_t seed, double amp,
                               int k_lo = -20, int k_hi = 20);

}  // namespace jborg
