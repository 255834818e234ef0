#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace oddlab::par {

// Thread budget for the data-parallel kernels and for concurrent experiment
// execution. Resolution order: explicit set_max_threads() override, then the
// ODDLAB_THREADS environment variable (0 = serial), then the OpenMP default.
int max_threads();
void set_max_threads(int n);  // n < 0 restores environment/default resolution

// Static-schedule parallel loop over [0, n). Each iteration writes disjoint
// state, so results are identical for any thread count.
template <class F>
void parallel_for(std::ptrdiff_t n, F&& body) {
#ifdef _OPENMP
  const int threads = max_threads();
  if (threads > 1 && n > 1) {
#pragma omp parallel for num_threads(threads) schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
    return;
  }
#endif
  for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
}

// Serial reference loop, kept so tests and benchmarks can compare against the
// OpenMP path directly.
template <class F>
void serial_for(std::ptrdiff_t n, F&& body) {
  for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
}

}  // namespace oddlab::par
