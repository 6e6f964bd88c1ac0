#include <doctest.h>

#include "jborg/herglotz.hpp"
#include "jborg/instances.hpp"
#include "jborg/parallel.hpp"

using namespace jborg;

TEST_CASE("parallel map fills every slot exactly once") {
  std::vector<long> hits(1000, 0);
  parallel_for(1000, [&](long i) { hits[i] += i + 1; }, 4);
  for (long i = 0; i < 1000; ++i) CHECK(hits[i] == i + 1);
}

TEST_CASE("xi grid: parallel kernel equals the serial reference bit for bit") {
  auto c = random_jacobi(2, 181, 0.3);
  WeylOptions opt;
  opt.fast_tail = true;
  XiGrid serial = xi_grid(c, 0, -3.0, 3.0, 61, 1e-3, XiTarget::XiOfG,
                          Side::Plus, opt, /*workers=*/1);
  XiGrid par = xi_grid(c, 0, -3.0, 3.0, 61, 1e-3, XiTarget::XiOfG,
                       Side::Plus, opt, /*workers=*/4);
  REQUIRE(serial.values.size() == par.values.size());
  for (std::size_t i = 0; i < serial.values.size(); ++i) {
    CHECK(serial.lambdas[i] == par.lambdas[i]);
    CHECK((serial.values[i] - par.values[i]).norm() == 0.0);
  }
}

TEST_CASE("stieltjes densities: parallel equals serial") {
  auto c = free_jacobi(1);
  WeylOptions opt;
  opt.fast_tail = true;
  MatrixEvaluator f = [&](cplx z) { return weyl_pair(c, z, 0, opt).plus; };
  MatrixMeasure s = stieltjes_measure(f, -3.0, 3.0, 200, 1e-3, 1);
  MatrixMeasure p = stieltjes_measure(f, -3.0, 3.0, 200, 1e-3, 4);
  for (std::size_t i = 0; i < s.nodes.size(); ++i)
    CHECK((s.weights[i] - p.weights[i]).norm() == 0.0);
}

TEST_CASE("worker resolution: explicit beats environment") {
  CHECK(resolve_workers(3) == 3);
  CHECK(resolve_workers(1) == 1);
}

TEST_CASE("JBORG_WORKERS environment fallback") {
  setenv("JBORG_WORKERS", "5", 1);
  CHECK(resolve_workers(0) == 5);
  CHECK(resolve_workers(2) == 2);
  unsetenv("JBORG_WORKERS");
}
