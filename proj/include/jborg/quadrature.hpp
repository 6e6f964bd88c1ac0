#pragma once

#include <utility>
#include <vector>

namespace jborg {

// Gauss-Legendre nodes and weights on [-1, 1], Newton iteration on the
// Legendre recurrence.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

// Same, mapped to [a, b].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n,
                                                                   double a,
                                                                   double b);

}  // namespace jborg
