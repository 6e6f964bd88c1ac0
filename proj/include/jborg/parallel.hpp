#pragma once

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace jborg {

// Worker count resolution: explicit argument > JBORG_WORKERS env > OpenMP
// default. workers == 1 selects the serial reference loop.
inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("JBORG_WORKERS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Data-parallel index map. Each fn(i) writes only to slot i of caller
// storage, so the merged result is independent of the schedule and equals
// the serial reference bit for bit.
template <class F>
void parallel_for(long n, F&& fn, int workers = 0) {
  int w = resolve_workers(workers);
#ifdef _OPENMP
  if (w > 1) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(w)
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
#endif
  (void)w;
  for (long i = 0; i < n; ++i) fn(i);
}

// Serial reference loop, kept as an explicit entry point for tests and the
// benchmark.
template <class F>
void serial_for(long n, F&& fn) {
  for (long i = 0; i < n; ++i) fn(i);
}

}  // namespace jborg
