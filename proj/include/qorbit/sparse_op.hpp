#pragma once

#include "errors.hpp"
#include "qscalar.hpp"

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

namespace qorbit {

/// Sparse vector: (index, value) pairs sorted by index, values nonzero.
using SVec = std::vector<std::pair<int, QScalar>>;

inline SVec svec_normalize(SVec v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SVec out;
  for (auto& e : v) {
    if (!out.empty() && out.back().first == e.first)
      out.back().second += e.second;
    else
      out.push_back(std::move(e));
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const auto& e) { return e.second.is_zero(); }),
            out.end());
  return out;
}

inline SVec svec_axpy(const SVec& x, const QScalar& a, const SVec& y) {
  // x + a*y, merged.
  SVec out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      out.push_back(x[i++]);
    } else if (i == x.size() || y[j].first < x[i].first) {
      QScalar v = a * y[j].second;
      if (!v.is_zero()) out.push_back({y[j].first, v});
      ++j;
    } else {
      QScalar v = x[i].second + a * y[j].second;
      if (!v.is_zero()) out.push_back({x[i].first, v});
      ++i;
      ++j;
    }
  }
  return out;
}

inline SVec svec_scale(const SVec& x, const QScalar& a) {
  if (a.is_zero()) return {};
  SVec out = x;
  for (auto& e : out) e.second *= a;
  return out;
}

/// Exact sparse operator (COO, sorted by (row, col)). `trust` counts the
/// truncation-raising generator factors composed into the operator: on a
/// truncated module its columns are only meaningful for states of lowering
/// degree <= N - trust.
class SparseOperator {
 public:
  struct Entry {
    int r = 0;
    int c = 0;
    QScalar v;
  };

  SparseOperator() = default;
  SparseOperator(int rows, int cols) : rows_(rows), cols_(cols) {}

  static SparseOperator identity(int n) {
    SparseOperator op(n, n);
    for (int i = 0; i < n; ++i) op.es_.push_back({i, i, QScalar(1L)});
    return op;
  }

  static SparseOperator diagonal(std::vector<QScalar> d) {
    SparseOperator op(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (int i = 0; i < op.rows_; ++i)
      if (!d[i].is_zero()) op.es_.push_back({i, i, std::move(d[i])});
    return op;
  }

  static SparseOperator from_entries(int rows, int cols, std::vector<Entry> es, int trust = 0) {
    SparseOperator op(rows, cols);
    op.trust = trust;
    std::sort(es.begin(), es.end(), entry_less);
    for (auto& e : es) {
      if (e.r < 0 || e.r >= rows || e.c < 0 || e.c >= cols)
        throw QOrbitError("operator entry out of range");
      if (!op.es_.empty() && op.es_.back().r == e.r && op.es_.back().c == e.c)
        op.es_.back().v += e.v;
      else
        op.es_.push_back(std::move(e));
    }
    op.strip_zeros();
    return op;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<Entry>& entries() const { return es_; }
  bool is_zero() const { return es_.empty(); }
  std::size_t nnz() const { return es_.size(); }

  int trust = 0;

  SparseOperator operator+(const SparseOperator& o) const {
    require_shape(o);
    std::vector<Entry> es = es_;
    es.insert(es.end(), o.es_.begin(), o.es_.end());
    SparseOperator r = from_entries(rows_, cols_, std::move(es));
    r.trust = std::max(trust, o.trust);
    return r;
  }

  SparseOperator operator-(const SparseOperator& o) const { return *this + o.scaled(QScalar(-1L)); }

  SparseOperator scaled(const QScalar& a) const {
    SparseOperator r(rows_, cols_);
    r.trust = trust;
    if (a.is_zero()) return r;
    r.es_ = es_;
    for (Entry& e : r.es_) e.v *= a;
    return r;
  }

  SparseOperator operator-() const { return scaled(QScalar(-1L)); }

  /// Composition (*this) o B: apply B first.
  SparseOperator operator*(const SparseOperator& B) const {
    if (cols_ != B.rows_) throw ModuleMismatch("operator composition shape mismatch");
    std::vector<std::vector<const Entry*>> by_col(cols_);
    for (const Entry& e : es_) by_col[e.c].push_back(&e);
    std::map<std::pair<int, int>, QScalar> acc;
    for (const Entry& b : B.es_) {
      for (const Entry* a : by_col[b.r]) {
        QScalar v = a->v * b.v;
        if (v.is_zero()) continue;
        auto key = std::make_pair(a->r, b.c);
        auto it = acc.find(key);
        if (it == acc.end())
          acc.emplace(key, std::move(v));
        else
          it->second += v;
      }
    }
    SparseOperator r(rows_, B.cols_);
    r.trust = trust + B.trust;
    for (auto& kv : acc)
      if (!kv.second.is_zero()) r.es_.push_back({kv.first.first, kv.first.second, kv.second});
    return r;
  }

  SparseOperator transposed() const {
    SparseOperator r(cols_, rows_);
    r.trust = trust;
    std::vector<Entry> es;
    es.reserve(es_.size());
    for (const Entry& e : es_) es.push_back({e.c, e.r, e.v});
    std::sort(es.begin(), es.end(), entry_less);
    r.es_ = std::move(es);
    return r;
  }

  /// Kronecker product with index (a, b) -> a*o.dim + b.
  SparseOperator kron(const SparseOperator& o) const {
    SparseOperator r(rows_ * o.rows_, cols_ * o.cols_);
    r.trust = trust + o.trust;
    std::vector<Entry> es;
    es.reserve(es_.size() * o.es_.size());
    for (const Entry& a : es_)
      for (const Entry& b : o.es_) {
        QScalar v = a.v * b.v;
        if (!v.is_zero()) es.push_back({a.r * o.rows_ + b.r, a.c * o.cols_ + b.c, v});
      }
    std::sort(es.begin(), es.end(), entry_less);
    r.es_ = std::move(es);
    return r;
  }

  SVec apply(const SVec& x) const {
    std::vector<std::vector<const Entry*>> by_col(cols_);
    for (const Entry& e : es_) by_col[e.c].push_back(&e);
    SVec out;
    for (const auto& xe : x)
      for (const Entry* a : by_col[xe.first]) out.push_back({a->r, a->v * xe.second});
    return svec_normalize(std::move(out));
  }

  std::vector<QScalar> apply_dense(const std::vector<QScalar>& x) const {
    std::vector<QScalar> out(rows_);
    for (const Entry& e : es_) out[e.r] += e.v * x[e.c];
    return out;
  }

  /// Keeps only the listed columns (others zeroed); shape unchanged.
  SparseOperator restricted_cols(const std::vector<bool>& keep) const {
    SparseOperator r(rows_, cols_);
    r.trust = trust;
    for (const Entry& e : es_)
      if (keep[e.c]) r.es_.push_back(e);
    return r;
  }

  bool operator==(const SparseOperator& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || es_.size() != o.es_.size()) return false;
    for (std::size_t k = 0; k < es_.size(); ++k)
      if (es_[k].r != o.es_[k].r || es_[k].c != o.es_[k].c || es_[k].v != o.es_[k].v) return false;
    return true;
  }
  bool operator!=(const SparseOperator& o) const { return !(*this == o); }

  /// First nonzero entry of A - B on the kept columns, if any.
  static std::optional<Entry> first_difference(const SparseOperator& A, const SparseOperator& B,
                                               const std::vector<bool>* keep_cols = nullptr) {
    SparseOperator d = A - B;
    for (const Entry& e : d.es_) {
      if (keep_cols && !(*keep_cols)[e.c]) continue;
      return e;
    }
    return std::nullopt;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Entry> es_;

  static bool entry_less(const Entry& a, const Entry& b) {
    if (a.r != b.r) return a.r < b.r;
    return a.c < b.c;
  }

  void require_shape(const SparseOperator& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ModuleMismatch("operator shape mismatch");
  }

  void strip_zeros() {
    es_.erase(std::remove_if(es_.begin(), es_.end(),
                             [](const Entry& e) { return e.v.is_zero(); }),
              es_.end());
  }
};

inline SparseOperator commutator(const SparseOperator& A, const SparseOperator& B) {
  return A * B - B * A;
}

}  // namespace qorbit
