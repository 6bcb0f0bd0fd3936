#pragma once

#include <cstddef>

namespace gm::detail {

/// Runs f(i) for i in [0, n), optionally across OpenMP threads. Callers keep
/// per-index output slots (or merge commutative integer tallies), so the
/// parallel and serial paths produce bit-identical results.
template <class F>
void for_each_index(std::size_t n, bool parallel, F&& f) {
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      f(static_cast<std::size_t>(i));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) f(i);
  }
}

}  // namespace gm::detail
