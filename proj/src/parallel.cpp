#include "riskscope/parallel.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace riskscope::par {

namespace {
std::atomic<bool> g_enabled{true};
}

bool enabled() noexcept { return g_enabled.load(std::memory_order_relaxed); }
void set_enabled(bool on) noexcept { g_enabled.store(on, std::memory_order_relaxed); }

int worker_count() noexcept {
#ifdef _OPENMP
  return enabled() ? omp_get_max_threads() : 1;
#else
  return 1;
#endif
}

namespace detail {

void run_indexed(std::size_t n, void* ctx, void (*fn)(void*, std::size_t)) {
  const std::ptrdiff_t pn = static_cast<std::ptrdiff_t>(n);
#ifdef _OPENMP
  if (enabled() && pn > 1) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < pn; ++i) fn(ctx, static_cast<std::size_t>(i));
    return;
  }
#endif
  for (std::ptrdiff_t i = 0; i < pn; ++i) fn(ctx, static_cast<std::size_t>(i));
}

}  // namespace detail

}  // namespace riskscope::par
