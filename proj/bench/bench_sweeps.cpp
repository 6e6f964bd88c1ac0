// Benchmark: serial reference loop vs the OpenMP kernel on the grid sweeps
// that dominate real runs (xi grids and Weyl z-tables).
#include <chrono>
#include <cstdio>

#include "jborg/herglotz.hpp"
#include "jborg/instances.hpp"
#include "jborg/parallel.hpp"

using namespace jborg;
using Clock = std::chrono::steady_clock;

namespace {

template <class F>
double time_once(F&& f) {
  auto t0 = Clock::now();
  f();
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

int main() {
  const int workers = resolve_workers(0);
  std::printf("workers available: %d\n\n", workers);
  std::printf("%-34s %10s %10s %8s\n", "sweep", "serial[s]", "omp[s]",
              "speedup");

  auto c = borg_jacobi(-1.0, 3.0, 2);
  WeylOptions opt;
  opt.fast_tail = true;

  {
    auto run = [&](int w) {
      xi_grid(c, 0, -1.0, 3.0, 4001, 1e-3, XiTarget::XiOfG, Side::Plus, opt,
              w);
    };
    double ts = time_once([&] { run(1); });
    double tp = time_once([&] { run(workers); });
    std::printf("%-34s %10.3f %10.3f %8.2f\n", "xi grid 4001 nodes (m=2)", ts,
                tp, ts / tp);
  }
  {
    auto cr = random_jacobi(2, 99, 0.3);
    std::vector<cplx> zs;
    for (int i = 0; i < 400; ++i)
      zs.push_back(cplx(-2.0 + i * 0.01, 0.05 + 0.002 * (i % 7)));
    std::vector<Mat> out(zs.size());
    auto run = [&](int w) {
      parallel_for(
          static_cast<long>(zs.size()),
          [&](long i) {
            MPair p = weyl_pair(cr, zs[i], 0, opt);
            out[i] = small_inverse(p.minus - p.plus);
          },
          w);
    };
    double ts = time_once([&] { run(1); });
    double tp = time_once([&] { run(workers); });
    std::printf("%-34s %10.3f %10.3f %8.2f\n", "weyl z-table 400 pts (m=2)",
                ts, tp, ts / tp);
  }
  {
    auto cf = free_jacobi(1);
    MatrixEvaluator f = [&](cplx z) { return weyl_pair(cf, z, 0, opt).plus; };
    auto run = [&](int w) { stieltjes_measure(f, -3.0, 3.0, 4000, 1e-4, w); };
    double ts = time_once([&] { run(1); });
    double tp = time_once([&] { run(workers); });
    std::printf("%-34s %10.3f %10.3f %8.2f\n", "stieltjes 4000 nodes (m=1)",
                ts, tp, ts / tp);
  }
  return 0;
}
