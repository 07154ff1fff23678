#pragma once

#include "errors.hpp"
#include "sparse_op.hpp"

#include <map>
#include <optional>
#include <vector>

namespace qorbit {

using DenseMatrix = std::vector<std::vector<QScalar>>;

/// In-place reduced row echelon form. Returns the pivot column of each
/// surviving row, in order.
inline std::vector<int> rref(DenseMatrix& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  const int nrows = static_cast<int>(m.size());
  const int ncols = static_cast<int>(m[0].size());
  int row = 0;
  for (int col = 0; col < ncols && row < nrows; ++col) {
    int p = -1;
    for (int r = row; r < nrows; ++r)
      if (!m[r][col].is_zero()) {
        p = r;
        break;
      }
    if (p < 0) continue;
    std::swap(m[row], m[p]);
    QScalar inv = m[row][col].inverse();
    for (int c = col; c < ncols; ++c) m[row][c] *= inv;
    for (int r = 0; r < nrows; ++r) {
      if (r == row || m[r][col].is_zero()) continue;
      QScalar f = m[r][col];
      for (int c = col; c < ncols; ++c) m[r][c] -= f * m[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

/// Basis of the right kernel of m, each vector rescaled so its first nonzero
/// coordinate is 1. Basis order follows the free columns ascending.
inline std::vector<std::vector<QScalar>> kernel_basis(DenseMatrix m, int ncols) {
  std::vector<int> pivots = rref(m);
  std::vector<int> pivot_row(ncols, -1);
  for (std::size_t r = 0; r < pivots.size(); ++r) pivot_row[pivots[r]] = static_cast<int>(r);
  std::vector<std::vector<QScalar>> basis;
  for (int f = 0; f < ncols; ++f) {
    if (pivot_row[f] >= 0) continue;
    std::vector<QScalar> v(ncols);
    v[f] = QScalar(1L);
    for (int c = 0; c < ncols; ++c)
      if (pivot_row[c] >= 0) v[c] = -m[pivot_row[c]][f];
    int lead = 0;
    while (v[lead].is_zero()) ++lead;
    QScalar inv = v[lead].inverse();
    for (auto& x : v) x *= inv;
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Solves A x = b where A has full column rank and the system is consistent.
/// Throws NoSolution / NonUniqueSolution otherwise.
inline std::vector<QScalar> solve_unique(DenseMatrix a, const std::vector<QScalar>& b) {
  const int ncols = a.empty() ? 0 : static_cast<int>(a[0].size());
  for (std::size_t r = 0; r < a.size(); ++r) a[r].push_back(b[r]);
  std::vector<int> pivots = rref(a);
  for (int p : pivots)
    if (p == ncols) throw NoSolution("inconsistent linear system");
  if (static_cast<int>(pivots.size()) < ncols)
    throw NonUniqueSolution("underdetermined linear system");
  std::vector<QScalar> x(ncols);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = a[r][ncols];
  return x;
}

inline DenseMatrix inverse(DenseMatrix m) {
  const int n = static_cast<int>(m.size());
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(m[r].size()) != n) throw ModuleMismatch("inverse of non-square matrix");
    for (int c = 0; c < n; ++c) m[r].push_back(QScalar(r == c ? 1L : 0L));
  }
  std::vector<int> pivots = rref(m);
  for (int p : pivots)
    if (p >= n) throw NoSolution("matrix is singular");
  if (static_cast<int>(pivots.size()) < n) throw NoSolution("matrix is singular");
  DenseMatrix inv(n);
  for (int r = 0; r < n; ++r)
    inv[r] = std::vector<QScalar>(m[r].begin() + n, m[r].end());
  return inv;
}

inline DenseMatrix to_dense(const SparseOperator& op) {
  DenseMatrix m(op.rows(), std::vector<QScalar>(op.cols()));
  for (const auto& e : op.entries()) m[e.r][e.c] = e.v;
  return m;
}

/// Incremental row-space reducer over QScalar: feeds sparse vectors one at a
/// time, keeps an echelonized span, reports rank and membership.
class SpanReducer {
 public:
  /// Reduces v against the current span. Returns true if v was independent
  /// (and is absorbed into the span).
  bool add(SVec v) {
    v = reduce(std::move(v));
    if (v.empty()) return false;
    QScalar inv = v.front().second.inverse();
    for (auto& e : v) e.second *= inv;
    rows_.emplace(v.front().first, std::move(v));
    return true;
  }

  bool contains(SVec v) const { return reduce(std::move(v)).empty(); }

  int rank() const { return static_cast<int>(rows_.size()); }

  const std::map<int, SVec>& rows() const { return rows_; }

 private:
  std::map<int, SVec> rows_;  // pivot index -> row with leading 1 there

  SVec reduce(SVec v) const {
    while (!v.empty()) {
      auto it = rows_.find(v.front().first);
      if (it == rows_.end()) return v;
      v = svec_axpy(v, -v.front().second, it->second);
    }
    return v;
  }
};

}  // namespace qorbit
