#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lcgeo::kernels {

/// Execution mode for the data-parallel kernels. The parallel path computes
/// the same fixed-chunk partials as the serial one and combines them in chunk
/// order, so both modes produce bit-identical results for any thread count.
enum class Exec { serial, parallel };

Exec default_exec();
void set_default_exec(Exec mode);
int max_threads();

inline constexpr std::size_t kChunk = 1024;

template <class F>
double indexed_sum(std::size_t n, F&& term, Exec mode) {
  if (n == 0) return 0.0;
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(nchunks, 0.0);
#ifdef _OPENMP
  if (mode == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long long ci = 0; ci < static_cast<long long>(nchunks); ++ci) {
      const std::size_t c = static_cast<std::size_t>(ci);
      const std::size_t lo = c * kChunk, hi = lo + kChunk < n ? lo + kChunk : n;
      double s = 0.0;
      for (std::size_t i = lo; i < hi; ++i) s += term(i);
      partial[c] = s;
    }
  } else
#endif
  {
    (void)mode;
    for (std::size_t c = 0; c < nchunks; ++c) {
      const std::size_t lo = c * kChunk, hi = lo + kChunk < n ? lo + kChunk : n;
      double s = 0.0;
      for (std::size_t i = lo; i < hi; ++i) s += term(i);
      partial[c] = s;
    }
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

template <class F>
double indexed_sum(std::size_t n, F&& term) {
  return indexed_sum(n, std::forward<F>(term), default_exec());
}

template <class F>
void indexed_for(std::size_t n, F&& body, Exec mode) {
#ifdef _OPENMP
  if (mode == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (long long i = 0; i < static_cast<long long>(n); ++i) body(static_cast<std::size_t>(i));
    return;
  }
#endif
  (void)mode;
  for (std::size_t i = 0; i < n; ++i) body(i);
}

template <class F>
void indexed_for(std::size_t n, F&& body) {
  indexed_for(n, std::forward<F>(body), default_exec());
}

/// Minimum of term(i) over i < n with the smallest attaining index.
template <class F>
std::pair<double, std::size_t> indexed_min(std::size_t n, F&& term, Exec mode) {
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<std::pair<double, std::size_t>> partial(nchunks);
  auto chunk_min = [&](std::size_t c) {
    const std::size_t lo = c * kChunk, hi = lo + kChunk < n ? lo + kChunk : n;
    double best = term(lo);
    std::size_t arg = lo;
    for (std::size_t i = lo + 1; i < hi; ++i) {
      double v = term(i);
      if (v < best) {
        best = v;
        arg = i;
      }
    }
    partial[c] = {best, arg};
  };
#ifdef _OPENMP
  if (mode == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long long ci = 0; ci < static_cast<long long>(nchunks); ++ci) chunk_min(static_cast<std::size_t>(ci));
  } else
#endif
  {
    (void)mode;
    for (std::size_t c = 0; c < nchunks; ++c) chunk_min(c);
  }
  std::pair<double, std::size_t> best = partial[0];
  for (std::size_t c = 1; c < nchunks; ++c)
    if (partial[c].first < best.first) best = partial[c];
  return best;
}

template <class F>
std::pair<double, std::size_t> indexed_min(std::size_t n, F&& term) {
  return indexed_min(n, std::forward<F>(term), default_exec());
}

}  // namespace lcgeo::kernels
