#pragma once

#include <vector>

#include "pnptg/parallel.hpp"
#include "pnptg/sparse.hpp"

namespace pnptg {

enum class Preconditioner { none, jacobi };

struct SolverConfig {
  double rel_tolerance = 1e-10;
  // 0 means the default of 10 * dimension.
  int max_iterations = 0;
  Preconditioner preconditioner = Preconditioner::none;
  // Record the relative residual after each iteration in SolveReport.
  bool record_history = false;
};

struct SolveReport {
  int iterations = 0;
  double final_relative_residual = 0.0;
  bool converged = false;
  std::vector<double> history;
};

struct SolveResult {
  std::vector<double> x;
  SolveReport report;
};

// Conjugate gradient; requires the symmetric flag on A. Residual tolerance
// is relative to ||b||; b = 0 returns x = 0 after 0 iterations.
SolveResult solve_cg(const SparseMatrix& a, const std::vector<double>& b,
                     const SolverConfig& cfg = {},
                     ExecPolicy policy = default_exec_policy());

// BiCGStab for general square systems; breakdown reports converged = false.
SolveResult solve_bicgstab(const SparseMatrix& a, const std::vector<double>& b,
                           const SolverConfig& cfg = {},
                           ExecPolicy policy = default_exec_policy());

double l2_vec(const std::vector<double>& v,
              ExecPolicy policy = default_exec_policy());

}  // namespace pnptg
