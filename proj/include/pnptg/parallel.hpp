#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pnptg {

enum class ExecPolicy { serial, openmp };

// Process-wide default used by every kernel that does not receive an explicit
// policy. Starts as serial; the CLI and benchmarks may switch it.
ExecPolicy default_exec_policy();
void set_default_exec_policy(ExecPolicy policy);
bool openmp_available();
int max_threads();

// Deterministic reductions. Input is cut into fixed-size blocks, each block
// is summed by one shared kernel, and block results are folded in block
// order. Serial and OpenMP execution therefore produce identical bits.
double deterministic_sum(const double* x, std::size_t n, ExecPolicy policy);
double deterministic_dot(const double* x, const double* y, std::size_t n,
                         ExecPolicy policy);

template <class Body>
void parallel_for(std::size_t n, ExecPolicy policy, Body&& body) {
#ifdef _OPENMP
  if (policy == ExecPolicy::openmp) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      body(static_cast<std::size_t>(i));
    }
    return;
  }
#else
  (void)policy;
#endif
  for (std::size_t i = 0; i < n; ++i) {
    body(i);
  }
}

}  // namespace pnptg
