#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#include <omp.h>

namespace intraday {

/// Selects the plain loop or the OpenMP loop for the cell-parallel kernels.
/// Both paths run the same per-cell code; every cell is written by exactly one
/// iteration, so results are bitwise identical across paths and thread counts.
enum class Execution { serial, parallel };

inline void set_thread_count(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

/// Runs fn(i) for i in [0, n). Exceptions thrown inside the parallel region are
/// captured; the one from the lowest index is rethrown so error reporting does
/// not depend on scheduling.
template <class Fn>
void for_each_index(Execution exec, std::size_t n, Fn&& fn) {
  if (exec == Execution::serial) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr first_error;
  std::size_t first_index = n;
  std::mutex guard;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(guard);
      if (static_cast<std::size_t>(i) < first_index) {
        first_index = static_cast<std::size_t>(i);
        first_error = std::current_exception();
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace intraday
