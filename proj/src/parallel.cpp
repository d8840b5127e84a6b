// SPDX-License-Identifier: Apache-2.0
#include "hillband/parallel.hpp"

#include <cstdlib>
#include <string>

namespace hillband {

int max_threads() {
#ifdef _OPENMP
  int nt = omp_get_max_threads();
#else
  int nt = 1;
#endif
  if (const char* env = std::getenv("HILL_THREADS")) {
    try {
      int cap = std::stoi(env);
      if (cap >= 1 && cap < nt) nt = cap;
    } catch (...) {
      // unparsable value: keep the default
    }
  }
  return nt < 1 ? 1 : nt;
}

}  // namespace hillband
