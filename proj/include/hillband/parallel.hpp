// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hillband {

/// Execution policy for batch kernels. Exec::seq is the serial reference
/// path; Exec::par runs the identical per-item code under OpenMP. Results
/// must not depend on the policy: every work item writes its own slot and
/// no floating-point reduction crosses items.
enum class Exec { seq, par };

/// Worker cap: the HILL_THREADS environment variable when set (clamped to
/// at least 1), otherwise the OpenMP default. Returns 1 when built without
/// OpenMP. Read fresh on each call so tests can adjust the environment.
int max_threads();

/// Maps body(i) over i in [0, n). Items must be independent; the first
/// exception thrown by any item is rethrown on the calling thread.
template <class F>
void parallel_for(Exec exec, std::size_t n, F&& body) {
#ifdef _OPENMP
  if (exec == Exec::par && n > 1) {
    std::exception_ptr err;
    const int nt = max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(nt)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical(hillband_parallel_for_err)
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
    return;
  }
#else
  (void)exec;
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace hillband
