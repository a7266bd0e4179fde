#pragma once

#include "graded.hpp"

#include <bit>
#include <cstdint>

namespace dgx {

using Mask = std::uint64_t;

inline int popcount(Mask m) { return std::popcount(m); }

// sign of a∧b for monomials in odd generators (bit i = generator i), 0 if they overlap.
// Only the number of transpositions matters since every generator is odd.
inline int wedge_sign(Mask a, Mask b) {
  if (a & b) return 0;
  int inv = 0;
  for (Mask x = b; x; x &= x - 1) {
    int j = std::countr_zero(x);
    inv += popcount(a >> (j + 1));
  }
  return sgn(inv);
}

inline std::vector<int> mask_bits(Mask m) {
  std::vector<int> out;
  for (; m; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

template <class F>
void for_each_submask(Mask m, F&& f) {
  Mask s = m;
  while (true) {
    f(s);
    if (s == 0) break;
    s = (s - 1) & m;
  }
}

// Finite (possibly truncated) graded coalgebra on a flat basis.
struct Coalgebra {
  GradedVectorSpace space;
  int unit = -1;
  std::vector<std::vector<std::tuple<int, int, Q>>> delta;
  int top = -1;  // complete through this degree

  Q counit(int i) const { return i == unit ? Q(1) : Q(0); }
};

using TensorVec = std::map<std::pair<int, int>, Q>;

// residuals: each returns the number of failing basis elements
inline int coassociativity_residual(const Coalgebra& c) {
  int bad = 0;
  for (int x = 0; x < c.space.dim(); ++x) {
    std::map<std::tuple<int, int, int>, Q> l, r;
    for (auto& [a, b, q] : c.delta[x]) {
      for (auto& [a1, a2, q1] : c.delta[a]) l[{a1, a2, b}] += q * q1;
      for (auto& [b1, b2, q2] : c.delta[b]) r[{a, b1, b2}] += q * q2;
    }
    std::erase_if(l, [](auto& e) { return e.second == 0; });
    std::erase_if(r, [](auto& e) { return e.second == 0; });
    if (l != r) ++bad;
  }
  return bad;
}

inline int counit_residual(const Coalgebra& c) {
  int bad = 0;
  for (int x = 0; x < c.space.dim(); ++x) {
    VecBuilder l, r;
    for (auto& [a, b, q] : c.delta[x]) {
      l.add(b, q * c.counit(a));
      r.add(a, q * c.counit(b));
    }
    SparseVec want{{x, Q(1)}};
    if (l.take() != want || r.take() != want) ++bad;
  }
  return bad;
}

inline int cocommutativity_residual(const Coalgebra& c) {
  int bad = 0;
  for (int x = 0; x < c.space.dim(); ++x) {
    TensorVec l, r;
    for (auto& [a, b, q] : c.delta[x]) {
      l[{a, b}] += q;
      r[{b, a}] += q * sgn(c.space.degree(a) * c.space.degree(b));
    }
    std::erase_if(l, [](auto& e) { return e.second == 0; });
    std::erase_if(r, [](auto& e) { return e.second == 0; });
    if (l != r) ++bad;
  }
  return bad;
}

// D of degree `deg`: Δ D = (D⊗1 + 1⊗D) Δ, checked on basis elements of degree <= upto
inline int coderivation_residual(const Coalgebra& c, const SparseMatrix& D, int deg, int upto) {
  int bad = 0;
  for (int x = 0; x < c.space.dim(); ++x) {
    if (c.space.degree(x) > upto) continue;
    TensorVec l, r;
    for (auto& [y, q] : D.col(x))
      for (auto& [a, b, q2] : c.delta[y]) l[{a, b}] += q * q2;
    for (auto& [a, b, q] : c.delta[x]) {
      for (auto& [a1, q1] : D.col(a)) r[{a1, b}] += q * q1;
      int s = sgn(deg * c.space.degree(a));
      for (auto& [b1, q1] : D.col(b)) r[{a, b1}] += s * q * q1;
    }
    std::erase_if(l, [](auto& e) { return e.second == 0; });
    std::erase_if(r, [](auto& e) { return e.second == 0; });
    if (l != r) ++bad;
  }
  return bad;
}

// F: C -> C' is a coalgebra map, checked on degrees <= upto
inline int coalgebra_map_residual(const Coalgebra& c, const Coalgebra& c2, const SparseMatrix& F, int upto) {
  int bad = 0;
  for (int x = 0; x < c.space.dim(); ++x) {
    if (c.space.degree(x) > upto) continue;
    TensorVec l, r;
    for (auto& [y, q] : F.col(x))
      for (auto& [a, b, q2] : c2.delta[y]) l[{a, b}] += q * q2;
    for (auto& [a, b, q] : c.delta[x])
      for (auto& [a1, q1] : F.col(a))
        for (auto& [b1, q2] : F.col(b)) r[{a1, b1}] += q * q1 * q2;
    std::erase_if(l, [](auto& e) { return e.second == 0; });
    std::erase_if(r, [](auto& e) { return e.second == 0; });
    if (l != r) ++bad;
  }
  return bad;
}

// kernel of the reduced coproduct on the augmentation ideal
inline Subspace primitives(const Coalgebra& c) {
  int n = c.space.dim();
  std::vector<Triplet> ts;
  for (int x = 0; x < n; ++x) {
    if (x == c.unit) continue;
    for (auto& [a, b, q] : c.delta[x]) {
      if (a == c.unit || b == c.unit) continue;
      ts.emplace_back(a * n + b, x, q);
    }
  }
  ts.emplace_back(n * n, c.unit, Q(1));  // exclude the unit
  return kernel_basis(SparseMatrix::from_triplets(n * n + 1, n, ts));
}

// ---------- exterior coalgebra on odd generators ----------

struct ExteriorCoalgebra {
  std::vector<int> gen_degree;  // all odd
  std::vector<std::string> gen_name;
  IndexedBasis<Mask> basis;
  Coalgebra coalg;

  int degree(Mask m) const {
    int d = 0;
    for (int i : mask_bits(m)) d += gen_degree[i];
    return d;
  }
};

inline std::string monomial_label(Mask m, const std::vector<std::string>& names) {
  if (!m) return "1";
  std::string s;
  for (int i : mask_bits(m)) s += (s.empty() ? "" : "*") + names[i];
  return s;
}

inline ExteriorCoalgebra exterior_coalgebra(std::vector<int> gen_degree, std::vector<std::string> names, int max_degree) {
  if (gen_degree.size() > 63) throw std::invalid_argument("exterior_coalgebra: too many generators");
  for (int d : gen_degree)
    if (d % 2 == 0) throw std::invalid_argument("exterior_coalgebra: generators must be odd");
  ExteriorCoalgebra e;
  e.gen_degree = std::move(gen_degree);
  e.gen_name = std::move(names);
  int n = (int)e.gen_degree.size();
  std::vector<std::tuple<Mask, int, std::string>> items;
  // enumerate by popcount to keep a natural ordering within degrees
  std::vector<Mask> all;
  for (Mask m = 0; m < (Mask(1) << n); ++m)
    if (e.degree(m) <= max_degree) all.push_back(m);
  std::stable_sort(all.begin(), all.end(), [](Mask a, Mask b) {
    return popcount(a) != popcount(b) ? popcount(a) < popcount(b) : a < b;
  });
  for (Mask m : all) items.emplace_back(m, e.degree(m), monomial_label(m, e.gen_name));
  e.basis = make_basis(std::move(items));
  e.coalg.space = e.basis.space;
  e.coalg.unit = e.basis.at(0);
  e.coalg.top = max_degree;
  e.coalg.delta.resize(e.basis.dim());
  for (int x = 0; x < e.basis.dim(); ++x) {
    Mask m = e.basis.key(x);
    for_each_submask(m, [&](Mask a) {
      Mask b = m & ~a;
      e.coalg.delta[x].emplace_back(e.basis.at(a), e.basis.at(b), Q(wedge_sign(a, b)));
    });
  }
  return e;
}

// ---------- symmetric coalgebra on even generators ----------

using Exps = std::vector<int>;

inline Z binom(int n, int k) {
  Z r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline Z factorial(int n) {
  Z r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

inline Z multi_factorial(const Exps& a) {
  Z r = 1;
  for (int x : a) r *= factorial(x);
  return r;
}

// all exponent vectors of weighted degree <= max (generator degrees > 0)
inline std::vector<Exps> exponent_vectors(const std::vector<int>& gen_degree, int max_degree) {
  std::vector<Exps> out;
  Exps cur(gen_degree.size(), 0);
  std::function<void(size_t, int)> rec = [&](size_t i, int left) {
    if (i == gen_degree.size()) {
      out.push_back(cur);
      return;
    }
    for (int k = 0; gen_degree[i] * k <= left; ++k) {
      cur[i] = k;
      rec(i + 1, left - gen_degree[i] * k);
    }
    cur[i] = 0;
  };
  rec(0, max_degree);
  return out;
}

inline int weight(const Exps& a) {
  int w = 0;
  for (int x : a) w += x;
  return w;
}

inline std::string exps_label(const Exps& a, const std::vector<std::string>& names) {
  std::string s;
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    if (!s.empty()) s += "*";
    s += names[i];
    if (a[i] > 1) s += "^" + std::to_string(a[i]);
  }
  return s.empty() ? "1" : s;
}

struct SymmetricCoalgebra {
  std::vector<int> gen_degree;  // all even, positive
  std::vector<std::string> gen_name;
  IndexedBasis<Exps> basis;
  Coalgebra coalg;

  int degree(const Exps& a) const {
    int d = 0;
    for (size_t i = 0; i < a.size(); ++i) d += a[i] * gen_degree[i];
    return d;
  }
};

// binomial coproduct u^a -> sum C(a,b) u^b ⊗ u^(a-b)
inline SymmetricCoalgebra symmetric_coalgebra(std::vector<int> gen_degree, std::vector<std::string> names, int max_degree) {
  for (int d : gen_degree)
    if (d <= 0 || d % 2) throw std::invalid_argument("symmetric_coalgebra: generators must have positive even degree");
  SymmetricCoalgebra s;
  s.gen_degree = std::move(gen_degree);
  s.gen_name = std::move(names);
  std::vector<Exps> all = exponent_vectors(s.gen_degree, max_degree);
  std::stable_sort(all.begin(), all.end(), [&](const Exps& a, const Exps& b) {
    return weight(a) != weight(b) ? weight(a) < weight(b) : a > b;
  });
  std::vector<std::tuple<Exps, int, std::string>> items;
  for (auto& a : all) items.emplace_back(a, s.degree(a), exps_label(a, s.gen_name));
  s.basis = make_basis(std::move(items));
  s.coalg.space = s.basis.space;
  s.coalg.unit = s.basis.at(Exps(s.gen_degree.size(), 0));
  s.coalg.top = max_degree;
  s.coalg.delta.resize(s.basis.dim());
  for (int x = 0; x < s.basis.dim(); ++x) {
    const Exps& a = s.basis.key(x);
    for (auto& b : exponent_vectors(s.gen_degree, s.degree(a))) {
      bool ok = true;
      Z c = 1;
      Exps rest(a.size());
      for (size_t i = 0; i < a.size() && ok; ++i) {
        if (b[i] > a[i]) ok = false;
        else {
          c *= binom(a[i], b[i]);
          rest[i] = a[i] - b[i];
        }
      }
      if (ok) s.coalg.delta[x].emplace_back(s.basis.at(b), s.basis.at(rest), Q(c));
    }
  }
  return s;
}

// ---------- tensor coalgebra (deconcatenation) ----------

using Word = std::vector<int>;

struct TensorCoalgebra {
  GradedVectorSpace letters;  // positive degrees
  IndexedBasis<Word> basis;
  Coalgebra coalg;

  int degree(const Word& w) const {
    int d = 0;
    for (int l : w) d += letters.degree(l);
    return d;
  }
};

inline std::vector<Word> words_up_to(const GradedVectorSpace& letters, int max_degree) {
  std::vector<Word> out{{}};
  for (size_t k = 0; k < out.size(); ++k) {
    int d = 0;
    for (int l : out[k]) d += letters.degree(l);
    for (int l = 0; l < letters.dim(); ++l)
      if (d + letters.degree(l) <= max_degree) {
        Word w = out[k];
        w.push_back(l);
        out.push_back(std::move(w));
      }
  }
  return out;
}

inline TensorCoalgebra tensor_coalgebra(GradedVectorSpace letters, int max_degree) {
  for (int i = 0; i < letters.dim(); ++i)
    if (letters.degree(i) <= 0) throw std::invalid_argument("tensor_coalgebra: letters must have positive degree");
  TensorCoalgebra t;
  t.letters = std::move(letters);
  std::vector<std::tuple<Word, int, std::string>> items;
  for (auto& w : words_up_to(t.letters, max_degree)) {
    std::string lab = "[";
    for (size_t i = 0; i < w.size(); ++i) lab += (i ? "|" : "") + t.letters.label(w[i]);
    items.emplace_back(w, t.degree(w), lab + "]");
  }
  t.basis = make_basis(std::move(items));
  t.coalg.space = t.basis.space;
  t.coalg.unit = t.basis.at(Word{});
  t.coalg.top = max_degree;
  t.coalg.delta.resize(t.basis.dim());
  for (int x = 0; x < t.basis.dim(); ++x) {
    const Word& w = t.basis.key(x);
    for (size_t k = 0; k <= w.size(); ++k)
      t.coalg.delta[x].emplace_back(t.basis.at(Word(w.begin(), w.begin() + k)), t.basis.at(Word(w.begin() + k, w.end())),
                                    Q(1));
  }
  return t;
}

}  // namespace dgx
