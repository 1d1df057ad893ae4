#pragma once

#include <cstddef>
#include <vector>

namespace riskscope::par {

// All hot loops in the library run through these helpers. Work is cut into
// fixed-size blocks whose boundaries depend only on the problem size, and
// per-block partial results are folded in block order, so the OpenMP path
// produces bit-identical results to the serial path for any thread count.
// Tests and the bench tool toggle the switch at runtime.

bool enabled() noexcept;
void set_enabled(bool on) noexcept;
int worker_count() noexcept;

inline constexpr std::size_t kBlock = 1024;

inline std::size_t block_count(std::size_t n, std::size_t block = kBlock) {
  return n == 0 ? 0 : (n + block - 1) / block;
}

namespace detail {
void run_indexed(std::size_t n, void* ctx, void (*fn)(void*, std::size_t));
}

/// body(i) for i in [0, n); iterations must be independent.
template <class F>
void for_each_index(std::size_t n, F&& body) {
  detail::run_indexed(n, &body, [](void* ctx, std::size_t i) { (*static_cast<F*>(ctx))(i); });
}

/// body(block_index, begin, end) over fixed-size blocks of [0, n).
template <class F>
void for_each_block(std::size_t n, F&& body, std::size_t block = kBlock) {
  const std::size_t nb = block_count(n, block);
  for_each_index(nb, [&](std::size_t b) {
    const std::size_t lo = b * block;
    const std::size_t hi = lo + block < n ? lo + block : n;
    body(b, lo, hi);
  });
}

/// Deterministic sum of term(i) over [0, n): per-block partials computed in
/// parallel, folded serially in block order.
template <class F>
double block_sum(std::size_t n, F&& term, std::size_t block = kBlock) {
  std::vector<double> partial(block_count(n, block), 0.0);
  for_each_block(
      n,
      [&](std::size_t b, std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        partial[b] = s;
      },
      block);
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace riskscope::par
