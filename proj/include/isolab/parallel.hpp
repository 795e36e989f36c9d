#pragma once

#include <cstdint>
#include <exception>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace isolab {

// Every parallel kernel in the library is a map over independent indices:
// each iteration writes its own output slot, so the serial and OpenMP paths
// produce bit-identical results. The serial path is the reference
// implementation; tests compare the two and the bench target times them.
enum class Exec { serial, parallel };

template <typename Body>
void parallel_for(std::int64_t n, Exec mode, Body&& body) {
#ifdef _OPENMP
  if (mode == Exec::parallel && n > 1) {
    std::exception_ptr first_error = nullptr;
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        body(i);
      } catch (...) {
#pragma omp critical(isolab_parallel_for_error)
        {
          if (!first_error) first_error = std::current_exception();
        }
      }
    }
    if (first_error) std::rethrow_exception(first_error);
    return;
  }
#else
  (void)mode;
#endif
  for (std::int64_t i = 0; i < n; ++i) body(i);
}

inline int worker_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace isolab
