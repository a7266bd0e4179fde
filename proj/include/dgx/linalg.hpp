#pragma once

#include "sparse.hpp"

#include <numeric>
#include <optional>
#include <unordered_map>

namespace dgx {

using Z = mpz_class;
using IntVec = std::vector<std::pair<int, Z>>;

// primitive integer multiple with positive leading entry
inline IntVec primitive(const SparseVec& v) {
  Z den = 1;
  for (auto& [i, x] : v) den = lcm(den, Z(x.get_den()));
  IntVec out;
  out.reserve(v.size());
  Z g = 0;
  for (auto& [i, x] : v) {
    Z n = x.get_num() * (den / x.get_den());
    g = gcd(g, n);
    out.emplace_back(i, std::move(n));
  }
  if (!out.empty()) {
    if (out.front().second < 0) g = -g;
    for (auto& e : out) e.second /= g;
  }
  return out;
}

inline void make_primitive(IntVec& v) {
  Z g = 0;
  for (auto& e : v) {
    g = gcd(g, e.second);
    if (g == 1) break;
  }
  if (v.empty()) return;
  if (v.front().second < 0) g = -g;
  if (g != 1)
    for (auto& e : v) e.second /= g;
}

// a*x - b*y
inline IntVec int_comb(const Z& a, const IntVec& x, const Z& b, const IntVec& y) {
  IntVec out;
  out.reserve(x.size() + y.size());
  size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      out.emplace_back(x[i].first, a * x[i].second);
      ++i;
    } else if (i == x.size() || y[j].first < x[i].first) {
      out.emplace_back(y[j].first, -b * y[j].second);
      ++j;
    } else {
      Z v = a * x[i].second - b * y[j].second;
      if (v != 0) out.emplace_back(x[i].first, std::move(v));
      ++i, ++j;
    }
  }
  return out;
}

// Incremental row echelon form over Z. Each update is fraction-free (cross
// multiplication) followed by removal of the row content, which keeps entries small.
class EchelonBasis {
 public:
  bool insert(const SparseVec& v) { return insert_int(primitive(v)); }

  bool insert_int(IntVec v) {
    while (!v.empty()) {
      auto it = piv_.find(v.front().first);
      if (it == piv_.end()) {
        piv_.emplace(v.front().first, std::move(v));
        return true;
      }
      const IntVec& p = it->second;
      Z a = p.front().second, b = v.front().second;
      Z g = gcd(a, b);
      v = int_comb(a / g, v, b / g, p);
      make_primitive(v);
    }
    return false;
  }

  bool contains(const SparseVec& v) const {
    IntVec w = primitive(v);
    while (!w.empty()) {
      auto it = piv_.find(w.front().first);
      if (it == piv_.end()) return false;
      const IntVec& p = it->second;
      Z a = p.front().second, b = w.front().second;
      Z g = gcd(a, b);
      w = int_comb(a / g, w, b / g, p);
      make_primitive(w);
    }
    return true;
  }

  int rank() const { return (int)piv_.size(); }

 private:
  std::map<int, IntVec> piv_;
};

inline int rank(const SparseMatrix& m) {
  const SparseMatrix& src = m;
  std::vector<int> order(src.cols());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return src.col(a).size() < src.col(b).size(); });
  EchelonBasis e;
  for (int c : order) {
    if (src.col(c).empty()) continue;
    e.insert(src.col(c));
    if (e.rank() == std::min(m.rows(), m.cols())) break;
  }
  return e.rank();
}

// Reduced row echelon form over Q, built row by row.
class RREF {
 public:
  explicit RREF(int cols) : cols_(cols), pos_(cols, -1) {}

  // returns pivot column or -1
  int insert(SparseVec r) {
    size_t k = 0;
    while (k < r.size()) {
      int c = r[k].first;
      if (pos_[c] >= 0) {
        Q f = r[k].second;
        r = axpy(r, -f, rows_[pos_[c]]);
      } else {
        ++k;
      }
    }
    if (r.empty()) return -1;
    int lead = r.front().first;
    Q inv = 1 / r.front().second;
    for (auto& e : r) e.second *= inv;
    for (auto& p : rows_) {
      Q f = coeff(p, lead);
      if (f != 0) p = axpy(p, -f, r);
    }
    pos_[lead] = (int)rows_.size();
    pivot_.push_back(lead);
    rows_.push_back(std::move(r));
    return lead;
  }

  int rank() const { return (int)rows_.size(); }
  int cols() const { return cols_; }
  bool is_pivot(int c) const { return pos_[c] >= 0; }
  const std::vector<SparseVec>& rows() const { return rows_; }
  const std::vector<int>& pivots() const { return pivot_; }

 private:
  int cols_;
  std::vector<int> pos_;
  std::vector<int> pivot_;
  std::vector<SparseVec> rows_;
};

// Subspace of Q^ambient with basis normalized so that basis[k] has a 1 at coord[k]
// and 0 at every other coord entry; coordinates of a member x are x[coord[k]].
struct Subspace {
  int ambient = 0;
  std::vector<SparseVec> basis;
  std::vector<int> coord;

  int dim() const { return (int)basis.size(); }

  SparseMatrix inclusion() const { return SparseMatrix::from_columns(ambient, basis); }

  // coordinate projection; exact on members only
  SparseMatrix coordinates() const {
    std::vector<Triplet> ts;
    for (int k = 0; k < dim(); ++k) ts.emplace_back(k, coord[k], Q(1));
    return SparseMatrix::from_triplets(dim(), ambient, ts);
  }
};

inline RREF rref_of_rows(const SparseMatrix& m) {
  SparseMatrix t = m.transpose();
  RREF r(m.cols());
  for (int i = 0; i < t.cols(); ++i)
    if (!t.col(i).empty()) r.insert(t.col(i));
  return r;
}

inline Subspace kernel_basis(const SparseMatrix& m) {
  RREF r = rref_of_rows(m);
  Subspace k;
  k.ambient = m.cols();
  std::vector<int> slot(m.cols(), -1);
  for (int c = 0; c < m.cols(); ++c)
    if (!r.is_pivot(c)) {
      slot[c] = (int)k.coord.size();
      k.coord.push_back(c);
    }
  std::vector<VecBuilder> vb(k.coord.size());
  for (size_t s = 0; s < k.coord.size(); ++s) vb[s].add(k.coord[s], Q(1));
  for (int i = 0; i < r.rank(); ++i) {
    int p = r.pivots()[i];
    for (auto& [c, x] : r.rows()[i])
      if (c != p) vb[slot[c]].add(p, -x);
  }
  for (auto& b : vb) k.basis.push_back(b.take());
  return k;
}

inline std::optional<std::vector<Q>> solve(const SparseMatrix& m, const std::vector<Q>& b) {
  if ((int)b.size() != m.rows()) throw std::invalid_argument("solve: rhs length mismatch");
  int n = m.cols();
  SparseMatrix t = m.transpose();
  RREF r(n + 1);
  for (int i = 0; i < m.rows(); ++i) {
    SparseVec row = t.col(i);
    if (b[i] != 0) row.emplace_back(n, b[i]);
    if (!row.empty() && r.insert(std::move(row)) == n) return std::nullopt;
  }
  std::vector<Q> x(n);
  for (int i = 0; i < r.rank(); ++i) {
    int p = r.pivots()[i];
    if (p == n) return std::nullopt;
    x[p] = coeff(r.rows()[i], n);
  }
  return x;
}

// Solve many right-hand sides (columns of B); throws if any is inconsistent.
inline SparseMatrix solve_columns(const SparseMatrix& m, const SparseMatrix& b) {
  int n = m.cols(), k = b.cols();
  SparseMatrix t = m.transpose(), bt = b.transpose();
  RREF r(n + k);
  for (int i = 0; i < m.rows(); ++i) {
    SparseVec row = t.col(i);
    for (auto& [c, v] : bt.col(i)) row.emplace_back(n + c, v);
    if (!row.empty() && r.insert(std::move(row)) >= n) throw std::domain_error("solve_columns: inconsistent system");
  }
  std::vector<VecBuilder> xs(k);
  for (int i = 0; i < r.rank(); ++i) {
    int p = r.pivots()[i];
    for (auto& [c, v] : r.rows()[i])
      if (c >= n) xs[c - n].add(p, v);
  }
  std::vector<SparseVec> cols;
  for (auto& x : xs) cols.push_back(x.take());
  return SparseMatrix::from_columns(n, std::move(cols));
}

inline std::vector<int> independent_columns(const SparseMatrix& m) {
  EchelonBasis e;
  std::vector<int> out;
  for (int c = 0; c < m.cols(); ++c)
    if (!m.col(c).empty() && e.insert(m.col(c))) out.push_back(c);
  return out;
}

// basis of the column space, as a subspace with normalized coordinates
inline Subspace column_space(const SparseMatrix& m) {
  RREF r = rref_of_rows(m.transpose());
  Subspace s;
  s.ambient = m.rows();
  for (int i = 0; i < r.rank(); ++i) {
    s.basis.push_back(r.rows()[i]);
    s.coord.push_back(r.pivots()[i]);
  }
  return s;
}

inline SparseMatrix invert(const SparseMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("invert: not square");
  if (rank(m) != m.rows()) throw std::domain_error("invert: singular matrix");
  return solve_columns(m, SparseMatrix::identity(m.rows()));
}

}  // namespace dgx
