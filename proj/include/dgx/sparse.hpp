#pragma once

#include "scalar.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

namespace dgx {

// sorted by index, no stored zeros
using SparseVec = std::vector<std::pair<int, Q>>;

inline SparseVec axpy(const SparseVec& y, const Q& a, const SparseVec& x) {
  SparseVec out;
  out.reserve(y.size() + x.size());
  size_t i = 0, j = 0;
  while (i < y.size() || j < x.size()) {
    if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
      out.push_back(y[i++]);
    } else if (i == y.size() || x[j].first < y[i].first) {
      out.emplace_back(x[j].first, a * x[j].second);
      ++j;
    } else {
      Q v = y[i].second + a * x[j].second;
      if (v != 0) out.emplace_back(y[i].first, std::move(v));
      ++i, ++j;
    }
  }
  return out;
}

inline SparseVec scaled(const SparseVec& x, const Q& a) {
  if (a == 0) return {};
  SparseVec out = x;
  for (auto& e : out) e.second *= a;
  return out;
}

inline Q coeff(const SparseVec& v, int i) {
  auto it = std::lower_bound(v.begin(), v.end(), i, [](const auto& e, int k) { return e.first < k; });
  return (it != v.end() && it->first == i) ? it->second : Q(0);
}

// accumulates terms in any order
class VecBuilder {
 public:
  void add(int i, const Q& c) {
    if (c == 0) return;
    auto [it, fresh] = acc_.try_emplace(i, c);
    if (!fresh) it->second += c;
  }
  void add(const SparseVec& v, const Q& c = 1) {
    for (auto& [i, x] : v) add(i, c * x);
  }
  SparseVec take() {
    SparseVec out;
    for (auto& [i, c] : acc_)
      if (c != 0) out.emplace_back(i, std::move(c));
    acc_.clear();
    return out;
  }

 private:
  std::map<int, Q> acc_;
};

using Triplet = std::tuple<int, int, Q>;

class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), col_(cols) {}

  static SparseMatrix identity(int n) {
    SparseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.col_[i] = {{i, Q(1)}};
    return m;
  }

  static SparseMatrix from_triplets(int rows, int cols, const std::vector<Triplet>& ts) {
    std::vector<VecBuilder> b(cols);
    for (auto& [r, c, v] : ts) {
      if (r < 0 || r >= rows || c < 0 || c >= cols) throw std::out_of_range("triplet outside matrix shape");
      b[c].add(r, v);
    }
    SparseMatrix m(rows, cols);
    for (int c = 0; c < cols; ++c) m.col_[c] = b[c].take();
    return m;
  }

  static SparseMatrix from_columns(int rows, std::vector<SparseVec> cols) {
    SparseMatrix m(rows, (int)cols.size());
    m.col_ = std::move(cols);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const SparseVec& col(int j) const { return col_[j]; }
  void set_col(int j, SparseVec v) { col_[j] = std::move(v); }
  const std::vector<SparseVec>& columns() const { return col_; }

  Q at(int r, int c) const { return coeff(col_[c], r); }

  size_t nnz() const {
    size_t n = 0;
    for (auto& c : col_) n += c.size();
    return n;
  }
  bool is_zero() const { return nnz() == 0; }

  std::vector<Triplet> triplets() const {
    std::vector<Triplet> out;
    for (int c = 0; c < cols_; ++c)
      for (auto& [r, v] : col_[c]) out.emplace_back(r, c, v);
    std::sort(out.begin(), out.end(), [](const Triplet& a, const Triplet& b) {
      return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    return out;
  }

  SparseVec apply(const SparseVec& x) const {
    VecBuilder b;
    for (auto& [j, c] : x) b.add(col_[j], c);
    return b.take();
  }

  SparseMatrix operator*(const SparseMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
    SparseMatrix m(rows_, o.cols_);
    for (int j = 0; j < o.cols_; ++j) m.col_[j] = apply(o.col_[j]);
    return m;
  }

  SparseMatrix operator+(const SparseMatrix& o) const { return combine(o, Q(1)); }
  SparseMatrix operator-(const SparseMatrix& o) const { return combine(o, Q(-1)); }
  SparseMatrix operator-() const { return scaled_by(Q(-1)); }

  SparseMatrix scaled_by(const Q& a) const {
    SparseMatrix m(rows_, cols_);
    for (int j = 0; j < cols_; ++j) m.col_[j] = scaled(col_[j], a);
    return m;
  }

  SparseMatrix transpose() const {
    std::vector<SparseVec> rows(rows_);
    for (int c = 0; c < cols_; ++c)
      for (auto& [r, v] : col_[c]) rows[r].emplace_back(c, v);
    return from_columns(cols_, std::move(rows));
  }

  // rows [r0,r1) x cols [c0,c1)
  SparseMatrix block(int r0, int r1, int c0, int c1) const {
    SparseMatrix m(r1 - r0, c1 - c0);
    for (int c = c0; c < c1; ++c) {
      SparseVec v;
      for (auto& [r, x] : col_[c])
        if (r >= r0 && r < r1) v.emplace_back(r - r0, x);
      m.col_[c - c0] = std::move(v);
    }
    return m;
  }

  SparseMatrix select_rows(const std::vector<int>& rows) const {
    std::vector<int> pos(rows_, -1);
    for (size_t k = 0; k < rows.size(); ++k) pos[rows[k]] = (int)k;
    SparseMatrix m((int)rows.size(), cols_);
    for (int c = 0; c < cols_; ++c) {
      SparseVec v;
      for (auto& [r, x] : col_[c])
        if (pos[r] >= 0) v.emplace_back(pos[r], x);
      std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.first < b.first; });
      m.col_[c] = std::move(v);
    }
    return m;
  }

  SparseMatrix select_cols(const std::vector<int>& cols) const {
    SparseMatrix m(rows_, (int)cols.size());
    for (size_t k = 0; k < cols.size(); ++k) m.col_[k] = col_[cols[k]];
    return m;
  }

  // vertical stack
  static SparseMatrix stack(const std::vector<SparseMatrix>& ms, int cols) {
    int rows = 0;
    for (auto& m : ms) rows += m.rows();
    SparseMatrix out(rows, cols);
    int off = 0;
    for (auto& m : ms) {
      if (m.cols() != cols) throw std::invalid_argument("stack: column mismatch");
      for (int c = 0; c < cols; ++c)
        for (auto& [r, v] : m.col(c)) out.col_[c].emplace_back(r + off, v);
      off += m.rows();
    }
    return out;
  }

  bool operator==(const SparseMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && col_ == o.col_;
  }

 private:
  SparseMatrix combine(const SparseMatrix& o, const Q& a) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sum shape mismatch");
    SparseMatrix m(rows_, cols_);
    for (int j = 0; j < cols_; ++j) m.col_[j] = axpy(col_[j], a, o.col_[j]);
    return m;
  }

  int rows_ = 0, cols_ = 0;
  std::vector<SparseVec> col_;
};

inline SparseMatrix operator*(const Q& a, const SparseMatrix& m) { return m.scaled_by(a); }

}  // namespace dgx
