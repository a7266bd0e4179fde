#pragma once

#include "linalg.hpp"

#include <functional>
#include <set>
#include <sstream>

namespace dgx {

// a degree query outside the stored or trusted window (exit code 3 in the CLI)
struct truncation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Homologically graded space with a flat basis sorted by degree.
class GradedVectorSpace {
 public:
  GradedVectorSpace() = default;

  // entries must already be sorted by degree
  GradedVectorSpace(std::vector<int> degree_of, std::vector<std::string> label)
      : deg_(std::move(degree_of)), label_(std::move(label)) {
    for (size_t i = 0; i < deg_.size(); ++i) {
      if (i && deg_[i] < deg_[i - 1]) throw std::invalid_argument("GradedVectorSpace: basis not sorted by degree");
      auto [it, fresh] = range_.try_emplace(deg_[i], (int)i, (int)i + 1);
      if (!fresh) it->second.second = (int)i + 1;
    }
  }

  int dim() const { return (int)deg_.size(); }
  int dim(int d) const {
    auto it = range_.find(d);
    return it == range_.end() ? 0 : it->second.second - it->second.first;
  }
  std::pair<int, int> range(int d) const {
    auto it = range_.find(d);
    if (it != range_.end()) return it->second;
    auto up = range_.lower_bound(d);
    int p = up == range_.end() ? dim() : up->second.first;
    return {p, p};
  }
  int degree(int i) const { return deg_[i]; }
  const std::string& label(int i) const { return label_[i]; }
  std::vector<int> degrees() const {
    std::vector<int> out;
    for (auto& [d, r] : range_) out.push_back(d);
    return out;
  }
  std::vector<std::string> basis(int d) const {
    auto [a, b] = range(d);
    return {label_.begin() + a, label_.begin() + b};
  }
  int min_degree() const { return deg_.empty() ? 0 : deg_.front(); }
  int max_degree() const { return deg_.empty() ? -1 : deg_.back(); }

 private:
  std::vector<int> deg_;
  std::vector<std::string> label_;
  std::map<int, std::pair<int, int>> range_;
};

// Basis indexed by structured keys; built in any order and sorted stably by degree.
template <class Key>
struct IndexedBasis {
  GradedVectorSpace space;
  std::vector<Key> keys;
  std::map<Key, int> index;

  int dim() const { return space.dim(); }
  int find(const Key& k) const {
    auto it = index.find(k);
    return it == index.end() ? -1 : it->second;
  }
  int at(const Key& k) const {
    int i = find(k);
    if (i < 0) throw std::out_of_range("basis key not present");
    return i;
  }
  const Key& key(int i) const { return keys[i]; }
};

template <class Key>
IndexedBasis<Key> make_basis(std::vector<std::tuple<Key, int, std::string>> items) {
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) { return std::get<1>(a) < std::get<1>(b); });
  IndexedBasis<Key> out;
  std::vector<int> deg;
  std::vector<std::string> lab;
  for (auto& [k, d, l] : items) {
    if (!out.index.emplace(k, (int)out.keys.size()).second) throw std::invalid_argument("duplicate basis key");
    out.keys.push_back(k);
    deg.push_back(d);
    lab.push_back(l);
  }
  out.space = GradedVectorSpace(std::move(deg), std::move(lab));
  return out;
}

// Homogeneous map of degree `shift`, stored flat.
struct GradedMap {
  GradedVectorSpace source, target;
  int shift = 0;
  SparseMatrix m;

  GradedMap() = default;
  GradedMap(GradedVectorSpace s, GradedVectorSpace t, int sh, SparseMatrix mat)
      : source(std::move(s)), target(std::move(t)), shift(sh), m(std::move(mat)) {
    if (m.rows() != target.dim() || m.cols() != source.dim()) throw std::invalid_argument("GradedMap: shape mismatch");
    for (int c = 0; c < m.cols(); ++c)
      for (auto& [r, v] : m.col(c))
        if (target.degree(r) != source.degree(c) + shift)
          throw std::invalid_argument("GradedMap: entry breaks homogeneity");
  }

  SparseMatrix block(int d) const {
    auto [c0, c1] = source.range(d);
    auto [r0, r1] = target.range(d + shift);
    return m.block(r0, r1, c0, c1);
  }
  std::map<int, SparseMatrix> blocks() const {
    std::map<int, SparseMatrix> out;
    for (int d : source.degrees()) out.emplace(d, block(d));
    return out;
  }
};

inline GradedMap compose(const GradedMap& f, const GradedMap& g) {
  return GradedMap(g.source, f.target, f.shift + g.shift, f.m * g.m);
}

struct Homology {
  int dim = 0;
  std::vector<SparseVec> representatives;  // flat coordinates in the chain space
};

// Homological chain complex, d of degree -1. Degrees in [lo, hi] are complete: their
// basis and the differential out of them are exact. Outside that window nothing is known.
struct ChainComplex {
  GradedVectorSpace space;
  SparseMatrix d;
  int lo = 0, hi = -1;

  ChainComplex() = default;
  ChainComplex(GradedVectorSpace s, SparseMatrix diff, int l, int h)
      : space(std::move(s)), d(std::move(diff)), lo(l), hi(h) {
    GradedMap check(space, space, -1, d);
  }

  // a finite complex is complete everywhere; pad the window by one on each side
  static ChainComplex finite(GradedVectorSpace s, SparseMatrix diff) {
    int l = s.dim() ? s.min_degree() - 1 : 0, h = s.dim() ? s.max_degree() + 1 : 0;
    return ChainComplex(std::move(s), std::move(diff), l, h);
  }

  GradedMap differential() const { return GradedMap(space, space, -1, d); }
  SparseMatrix block(int j) const {
    auto [c0, c1] = space.range(j);
    auto [r0, r1] = space.range(j - 1);
    return d.block(r0, r1, c0, c1);
  }

  int trusted_lo() const { return lo + 1; }
  int trusted_hi() const { return hi - 1; }
  bool trusted(int j) const { return j >= trusted_lo() && j <= trusted_hi(); }

  void require(int j) const {
    if (!trusted(j)) {
      std::ostringstream os;
      os << "homology in degree " << j << " outside trusted window [" << trusted_lo() << "," << trusted_hi() << "]";
      throw truncation_error(os.str());
    }
  }

  // nonzero entries of d∘d restricted to complete degrees
  size_t d_squared_residual() const {
    SparseMatrix dd = d * d;
    size_t n = 0;
    for (int c = 0; c < dd.cols(); ++c)
      if (space.degree(c) >= lo + 2 && space.degree(c) <= hi) n += dd.col(c).size();
    return n;
  }

  int homology_dimension(int j) const {
    require(j);
    return kernel_basis(block(j)).dim() - rank(block(j + 1));
  }

  Homology homology(int j) const {
    require(j);
    auto [c0, c1] = space.range(j);
    Subspace z = kernel_basis(block(j));
    SparseMatrix b = block(j + 1);
    EchelonBasis e;
    for (int c = 0; c < b.cols(); ++c)
      if (!b.col(c).empty()) e.insert(b.col(c));
    Homology h;
    for (auto& v : z.basis)
      if (e.insert(v)) {
        SparseVec flat;
        for (auto& [i, x] : v) flat.emplace_back(i + c0, x);
        h.representatives.push_back(std::move(flat));
      }
    h.dim = (int)h.representatives.size();
    return h;
  }

  bool is_cycle(const SparseVec& v) const { return d.apply(v).empty(); }

  // v (homogeneous of degree j, flat) is d of something in degree j+1
  bool is_boundary(const SparseVec& v, int j) const {
    require(j);
    auto [c0, c1] = space.range(j);
    SparseMatrix b = block(j + 1);
    std::vector<Q> rhs(c1 - c0);
    for (auto& [i, x] : v) {
      if (i < c0 || i >= c1) throw std::invalid_argument("is_boundary: vector not of degree j");
      rhs[i - c0] = x;
    }
    return solve(b, rhs).has_value();
  }
};

// Restrict a complex to an invariant subspace (d must preserve it; checked).
inline ChainComplex subcomplex(const ChainComplex& c, const Subspace& s) {
  SparseMatrix inc = s.inclusion(), crd = s.coordinates();
  SparseMatrix x = crd * c.d * inc;
  if (!(inc * x == c.d * inc)) throw std::logic_error("subcomplex: subspace not preserved by d");
  std::vector<int> deg;
  std::vector<std::string> lab;
  for (int k = 0; k < s.dim(); ++k) {
    deg.push_back(c.space.degree(s.coord[k]));
    lab.push_back(c.space.label(s.coord[k]));
  }
  // kernel coords come out sorted by flat index, hence by degree
  return ChainComplex(GradedVectorSpace(deg, lab), x, c.lo, c.hi);
}

// Quotient of a space by a subspace spanned by homogeneous vectors.
struct Quotient {
  std::vector<int> kept;  // flat indices forming a basis of the quotient
  SparseMatrix project;   // ambient -> quotient
  SparseMatrix section;   // quotient -> ambient
};

inline Quotient quotient_by(int ambient, const SparseMatrix& spanning) {
  Subspace im = column_space(spanning);
  std::vector<char> piv(ambient, 0);
  for (int p : im.coord) piv[p] = 1;
  Quotient q;
  std::vector<int> slot(ambient, -1);
  for (int i = 0; i < ambient; ++i)
    if (!piv[i]) {
      slot[i] = (int)q.kept.size();
      q.kept.push_back(i);
    }
  std::vector<Triplet> ts;
  for (int i : q.kept) ts.emplace_back(slot[i], i, Q(1));
  for (int k = 0; k < im.dim(); ++k)
    for (auto& [i, x] : im.basis[k])
      if (!piv[i]) ts.emplace_back(slot[i], im.coord[k], -x);
  q.project = SparseMatrix::from_triplets((int)q.kept.size(), ambient, ts);
  q.section = SparseMatrix::identity(ambient).select_cols(q.kept);
  return q;
}

inline ChainComplex quotient_complex(const ChainComplex& c, const SparseMatrix& spanning) {
  Quotient q = quotient_by(c.space.dim(), spanning);
  SparseMatrix x = q.project * c.d * q.section;
  if (!(q.project * c.d * spanning).is_zero()) throw std::logic_error("quotient_complex: subspace not preserved by d");
  std::vector<int> deg;
  std::vector<std::string> lab;
  for (int i : q.kept) {
    deg.push_back(c.space.degree(i));
    lab.push_back(c.space.label(i));
  }
  return ChainComplex(GradedVectorSpace(deg, lab), x, c.lo, c.hi);
}

}  // namespace dgx
