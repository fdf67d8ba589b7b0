#include "pnptg/sparse.hpp"

#include <algorithm>
#include <stdexcept>

namespace pnptg {

namespace {

[[gnu::noinline]] double csr_row_dot(const int* cols, const double* vals,
                                     int len, const double* x) {
  double s = 0.0;
  for (int i = 0; i < len; ++i) s += vals[i] * x[cols[i]];
  return s;
}

}  // namespace

int SparseMatrix::find(int r, int c) const {
  const int* first = col_indices.data() + row_offsets[r];
  const int* last = col_indices.data() + row_offsets[r + 1];
  const int* it = std::lower_bound(first, last, c);
  if (it == last || *it != c) return -1;
  return static_cast<int>(it - col_indices.data());
}

double SparseMatrix::coeff(int r, int c) const {
  const int pos = find(r, c);
  return pos < 0 ? 0.0 : values[pos];
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(dim, 0.0);
  for (int r = 0; r < dim; ++r) d[r] = coeff(r, r);
  return d;
}

void SparseMatrix::multiply(const double* x, double* y,
                            ExecPolicy policy) const {
  parallel_for(static_cast<std::size_t>(dim), policy, [&](std::size_t r) {
    const int lo = row_offsets[r];
    y[r] = csr_row_dot(col_indices.data() + lo, values.data() + lo,
                       row_offsets[r + 1] - lo, x);
  });
}

std::vector<double> SparseMatrix::multiply(const std::vector<double>& x,
                                           ExecPolicy policy) const {
  if (static_cast<int>(x.size()) != dim) {
    throw std::invalid_argument("spmv: dimension mismatch");
  }
  std::vector<double> y(dim, 0.0);
  multiply(x.data(), y.data(), policy);
  return y;
}

SparseMatrix transpose_of(const SparseMatrix& a) {
  SparseMatrix t;
  t.dim = a.dim;
  t.symmetric = a.symmetric;
  t.row_offsets.assign(a.dim + 1, 0);
  for (int c : a.col_indices) t.row_offsets[c + 1] += 1;
  for (int i = 1; i <= a.dim; ++i) t.row_offsets[i] += t.row_offsets[i - 1];
  t.col_indices.resize(a.col_indices.size());
  t.values.resize(a.values.size());
  std::vector<int> cursor(t.row_offsets.begin(), t.row_offsets.end() - 1);
  for (int r = 0; r < a.dim; ++r) {
    for (int p = a.row_offsets[r]; p < a.row_offsets[r + 1]; ++p) {
      const int pos = cursor[a.col_indices[p]]++;
      t.col_indices[pos] = r;
      t.values[pos] = a.values[p];
    }
  }
  return t;
}

bool exactly_symmetric(const SparseMatrix& a) {
  for (int r = 0; r < a.dim; ++r) {
    for (int p = a.row_offsets[r]; p < a.row_offsets[r + 1]; ++p) {
      const int c = a.col_indices[p];
      const int q = a.find(c, r);
      if (q < 0 || a.values[q] != a.values[p]) return false;
    }
  }
  return true;
}

SparseMatrix add_scaled(const SparseMatrix& a, double s,
                        const SparseMatrix& b) {
  if (a.dim != b.dim || a.row_offsets != b.row_offsets ||
      a.col_indices != b.col_indices) {
    throw std::invalid_argument("add_scaled: sparsity patterns differ");
  }
  SparseMatrix out = a;
  out.symmetric = false;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = a.values[i] + s * b.values[i];
  }
  return out;
}

}  // namespace pnptg
