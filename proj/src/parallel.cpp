#include "pnptg/parallel.hpp"

#include <algorithm>
#include <vector>

namespace pnptg {

namespace {

ExecPolicy g_default_policy = ExecPolicy::serial;

constexpr std::size_t kBlock = 4096;

// noinline keeps a single instance of the block kernels, so the serial and
// OpenMP drivers run identical floating-point instruction sequences.
[[gnu::noinline]] double sum_block(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

[[gnu::noinline]] double dot_block(const double* x, const double* y,
                                   std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

}  // namespace

ExecPolicy default_exec_policy() { return g_default_policy; }

void set_default_exec_policy(ExecPolicy policy) {
#ifndef _OPENMP
  if (policy == ExecPolicy::openmp) policy = ExecPolicy::serial;
#endif
  g_default_policy = policy;
}

bool openmp_available() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

double deterministic_sum(const double* x, std::size_t n, ExecPolicy policy) {
  const std::size_t nblocks = (n + kBlock - 1) / kBlock;
  if (nblocks <= 1) return sum_block(x, n);
  std::vector<double> partial(nblocks);
  parallel_for(nblocks, policy, [&](std::size_t b) {
    const std::size_t lo = b * kBlock;
    partial[b] = sum_block(x + lo, std::min(kBlock, n - lo));
  });
  double s = 0.0;
  for (double v : partial) s += v;
  return s;
}

double deterministic_dot(const double* x, const double* y, std::size_t n,
                         ExecPolicy policy) {
  const std::size_t nblocks = (n + kBlock - 1) / kBlock;
  if (nblocks <= 1) return dot_block(x, y, n);
  std::vector<double> partial(nblocks);
  parallel_for(nblocks, policy, [&](std::size_t b) {
    const std::size_t lo = b * kBlock;
    partial[b] = dot_block(x + lo, y + lo, std::min(kBlock, n - lo));
  });
  double s = 0.0;
  for (double v : partial) s += v;
  return s;
}

}  // namespace pnptg
