#include "oddlab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace oddlab::par {

namespace {
std::atomic<int> g_override{-1};

int resolve_from_env() {
  const char* env = std::getenv("ODDLAB_THREADS");
  if (env != nullptr) {
    try {
      const int n = std::stoi(env);
      return n <= 0 ? 1 : n;
    } catch (...) {
      return 1;
    }
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}
}  // namespace

int max_threads() {
  const int o = g_override.load(std::memory_order_relaxed);
  if (o >= 0) return o <= 0 ? 1 : o;
  return resolve_from_env();
}

void set_max_threads(int n) { g_override.store(n, std::memory_order_relaxed); }

}  // namespace oddlab::par
