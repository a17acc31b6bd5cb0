#include "lcgeo/kernels.hpp"

#include <atomic>

namespace lcgeo::kernels {

namespace {
std::atomic<Exec> g_mode{
#ifdef _OPENMP
    Exec::parallel
#else
    Exec::serial
#endif
};
}  // namespace

Exec default_exec() { return g_mode.load(std::memory_order_relaxed); }

void set_default_exec(Exec mode) { g_mode.store(mode, std::memory_order_relaxed); }

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace lcgeo::kernels
