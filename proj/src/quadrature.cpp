#include "jborg/quadrature.hpp"

#include <cmath>

namespace jborg {

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  const int mid = (n + 1) / 2;
  for (int i = 0; i < mid; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Legendre recurrence: (j+1) P_{j+1} = (2j+1) t P_j - j P_{j-1}
      double p0 = 1.0, p1 = t;
      for (int j = 1; j < n; ++j) {
        double p2 = ((2.0 * j + 1.0) * t * p1 - j * p0) / (j + 1.0);
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = -t;
    x[n - 1 - i] = t;
    double ww = 2.0 / ((1.0 - t * t) * dp * dp);
    w[i] = ww;
    w[n - 1 - i] = ww;
  }
  return {x, w};
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n,
                                                                   double a,
                                                                   double b) {
  auto [x, w] = gauss_legendre(n);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    x[i] = c + h * x[i];
    w[i] *= h;
  }
  return {x, w};
}

}  // namespace jborg
