#pragma once

#include <vector>

#include "pnptg/parallel.hpp"

namespace pnptg {

// Square CSR matrix. Column indices are strictly increasing within each row;
// duplicates are merged at assembly time. The symmetric flag is a promise
// made by the producer and checked by exactly_symmetric in tests.
struct SparseMatrix {
  int dim = 0;
  std::vector<int> row_offsets;
  std::vector<int> col_indices;
  std::vector<double> values;
  bool symmetric = false;

  int nnz() const { return static_cast<int>(col_indices.size()); }
  // Position of entry (r, c) in the value array, -1 if not stored.
  int find(int r, int c) const;
  double coeff(int r, int c) const;
  std::vector<double> diagonal() const;

  void multiply(const double* x, double* y, ExecPolicy policy) const;
  std::vector<double> multiply(const std::vector<double>& x,
                               ExecPolicy policy = default_exec_policy()) const;
};

SparseMatrix transpose_of(const SparseMatrix& a);

// True iff the sparsity pattern is symmetric and a(i,j) == a(j,i) for every
// stored entry (floating-point equality, no tolerance).
bool exactly_symmetric(const SparseMatrix& a);

// a + s*b for matrices with identical sparsity patterns.
SparseMatrix add_scaled(const SparseMatrix& a, double s, const SparseMatrix& b);

}  // namespace pnptg
