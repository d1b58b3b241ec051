#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "corrtail/rational.hpp"

namespace corrtail {

// Dense matrix over Q. Sizes stay small (a few dozen rows); the heavy lifting
// for span closures is done on the sparse form below.
class QMat {
 public:
  QMat() = default;
  QMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

  static QMat identity(int n) {
    QMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rational& at(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
  const Rational& at(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

  bool is_zero() const {
    for (const auto& x : a_)
      if (x != 0) return false;
    return true;
  }

  bool is_square() const { return rows_ == cols_; }

  QMat transpose() const {
    QMat t(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
    return t;
  }

  // Entries are rational, so the adjoint is the transpose.
  QMat adjoint() const { return transpose(); }

  QMat operator+(const QMat& o) const {
    check_same_shape(o);
    QMat s(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) s.a_[i] = a_[i] + o.a_[i];
    return s;
  }

  QMat operator-(const QMat& o) const {
    check_same_shape(o);
    QMat s(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) s.a_[i] = a_[i] - o.a_[i];
    return s;
  }

  QMat operator*(const QMat& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("QMat: size mismatch in product");
    QMat p(rows_, o.cols_);
    for (int r = 0; r < rows_; ++r)
      for (int k = 0; k < cols_; ++k) {
        const Rational& x = at(r, k);
        if (x == 0) continue;
        for (int c = 0; c < o.cols_; ++c) {
          if (o.at(k, c) == 0) continue;
          p.at(r, c) += x * o.at(k, c);
        }
      }
    return p;
  }

  bool operator==(const QMat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }
  bool operator!=(const QMat& o) const { return !(*this == o); }

  // For an idempotent matrix the trace equals the rank.
  Rational trace() const {
    Rational t = 0;
    for (int i = 0; i < rows_ && i < cols_; ++i) t += at(i, i);
    return t;
  }

  bool is_idempotent() const { return is_square() && (*this) * (*this) == *this; }
  bool is_projection() const { return is_idempotent() && transpose() == *this; }

 private:
  void check_same_shape(const QMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("QMat: shape mismatch");
  }

  int rows_ = 0, cols_ = 0;
  std::vector<Rational> a_;
};

// Sparse row-major matrix used inside span closures. Rows hold sorted
// (column, value) pairs with nonzero values.
struct SMat {
  int rows = 0, cols = 0;
  std::vector<std::vector<std::pair<int, Rational>>> row;

  SMat() = default;
  SMat(int r, int c) : rows(r), cols(c), row(r) {}

  static SMat from_dense(const QMat& m) {
    SMat s(m.rows(), m.cols());
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c)
        if (m.at(r, c) != 0) s.row[r].emplace_back(c, m.at(r, c));
    return s;
  }

  QMat to_dense() const {
    QMat m(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (const auto& [c, v] : row[r]) m.at(r, c) = v;
    return m;
  }

  bool empty() const {
    for (const auto& r : row)
      if (!r.empty()) return false;
    return true;
  }
};

inline SMat mul(const SMat& a, const SMat& b) {
  if (a.cols != b.rows) throw std::invalid_argument("SMat: size mismatch in product");
  SMat p(a.rows, b.cols);
  // scratch accumulator reused across calls; entries are re-zeroed via the
  // touched list before returning
  static thread_local std::vector<Rational> acc;
  if (static_cast<int>(acc.size()) < b.cols) acc.resize(b.cols, Rational(0));
  std::vector<int> touched;
  for (int r = 0; r < a.rows; ++r) {
    touched.clear();
    for (const auto& [k, x] : a.row[r]) {
      for (const auto& [c, y] : b.row[k]) {
        if (acc[c] == 0) touched.push_back(c);
        acc[c] += x * y;
      }
    }
    if (touched.empty()) continue;
    std::sort(touched.begin(), touched.end());
    for (int c : touched) {
      if (acc[c] != 0) p.row[r].emplace_back(c, acc[c]);
      acc[c] = 0;
    }
  }
  return p;
}

inline SMat transpose(const SMat& a) {
  SMat t(a.cols, a.rows);
  for (int r = 0; r < a.rows; ++r)
    for (const auto& [c, v] : a.row[r]) t.row[c].emplace_back(r, v);
  return t;
}

// Sparse vector: sorted (index, value) pairs, values nonzero.
using SVec = std::vector<std::pair<int, Rational>>;

inline SVec smat_to_svec(const SMat& m) {
  SVec v;
  for (int r = 0; r < m.rows; ++r)
    for (const auto& [c, x] : m.row[r]) v.emplace_back(r * m.cols + c, x);
  return v;
}

inline SMat svec_to_smat(const SVec& v, int rows, int cols) {
  SMat m(rows, cols);
  for (const auto& [i, x] : v) m.row[i / cols].emplace_back(i % cols, x);
  return m;
}

// y - coef * x  (both sorted sparse vectors; y is consumed)
inline SVec svec_axpy(SVec y, const Rational& coef, const SVec& x) {
  SVec out;
  out.reserve(y.size() + x.size());
  size_t i = 0, j = 0;
  while (i < y.size() || j < x.size()) {
    if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
      out.push_back(std::move(y[i++]));
    } else if (i == y.size() || x[j].first < y[i].first) {
      out.emplace_back(x[j].first, -coef * x[j].second);
      ++j;
    } else {
      Rational v = std::move(y[i].second);
      v -= coef * x[j].second;
      if (v != 0) out.emplace_back(y[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

// Incremental reduced-row-echelon basis of a subspace of Q^len. The row set
// in RREF form is canonical for the subspace, so results do not depend on
// insertion order.
class RrefBasis {
 public:
  explicit RrefBasis(int len) : len_(len) {}

  int length() const { return len_; }
  int dim() const { return static_cast<int>(rows_.size()); }

  // Fully reduce v against the current basis. Rows are kept in full RREF
  // (each row vanishes on every other pivot column), so one left-to-right
  // sweep suffices: subtracting a pivot row touches no earlier index and
  // reintroduces no pivot column.
  SVec reduce(SVec v) const {
    size_t i = 0;
    while (i < v.size()) {
      auto it = pivot_row_.find(v[i].first);
      if (it == pivot_row_.end()) {
        ++i;
        continue;
      }
      Rational coef = v[i].second;  // copy: v is consumed by the subtraction
      v = svec_axpy(std::move(v), coef, rows_[it->second]);
    }
    return v;
  }

  bool contains(const SVec& v) const { return reduce(v).empty(); }

  // Insert v; returns true if the dimension grew.
  bool insert(SVec v) {
    v = reduce(std::move(v));
    if (v.empty()) return false;
    Rational lead = v.front().second;
    if (lead != 1)
      for (auto& [i, x] : v) x /= lead;
    int pivot = v.front().first;
    // eliminate the new pivot from existing rows
    for (auto& r : rows_) {
      Rational c = value_at(r, pivot);
      if (c != 0) r = svec_axpy(std::move(r), c, v);
    }
    pivot_row_[pivot] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(v));
    return true;
  }

  const std::vector<SVec>& rows() const { return rows_; }

  // Rows sorted by pivot index: the canonical RREF presentation.
  std::vector<SVec> canonical_rows() const {
    std::vector<SVec> out;
    out.reserve(rows_.size());
    for (const auto& [p, r] : pivot_row_) out.push_back(rows_[r]);
    return out;
  }

  bool same_subspace(const RrefBasis& o) const {
    return len_ == o.len_ && canonical_rows() == o.canonical_rows();
  }

 private:
  static Rational value_at(const SVec& v, int idx) {
    auto it = std::lower_bound(v.begin(), v.end(), idx,
                               [](const auto& p, int i) { return p.first < i; });
    if (it != v.end() && it->first == idx) return it->second;
    return Rational(0);
  }

  int len_;
  std::vector<SVec> rows_;
  std::map<int, int> pivot_row_;
};

}  // namespace corrtail
