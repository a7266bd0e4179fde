#pragma once

#include "weil.hpp"

namespace dgx {

// Relative bar construction BΛ_∂[sg] = T'[sIΛ'] ⊗ Λ'_∂[sg].
// Basis [a_1|…|a_n] ⊗ b with a_i nonempty exterior monomials (bar degree |a_i|+1).
// D = d_bar - τ^B̄∩ + ∂, where ∂ is transported from the Chevalley–Eilenberg boundary of the
// iterated semidirect product g ⋉ … ⋉ g (copy of a_i acted on by all later copies and by b).
struct RelativeBar {
  using Key = std::pair<std::vector<Mask>, Mask>;
  int max_degree = 0;
  IndexedBasis<Key> basis;
  Coalgebra coalg;
  SparseMatrix d_bar, cap, partial;
  CalculusModule calc;  // differential D

  static int word_degree(const std::vector<Mask>& w) {
    int d = 0;
    for (Mask a : w) d += popcount(a) + 1;
    return d;
  }
};

namespace detail {

inline std::vector<std::vector<Mask>> bar_words(int n, int max_degree) {
  std::vector<std::vector<Mask>> out{{}};
  for (size_t k = 0; k < out.size(); ++k) {
    int d = RelativeBar::word_degree(out[k]);
    for (Mask a = 1; a < (Mask(1) << n); ++a)
      if (d + popcount(a) + 1 <= max_degree) {
        auto w = out[k];
        w.push_back(a);
        out.push_back(std::move(w));
      }
  }
  return out;
}

// sign of s^{⊗n}: [a_1|…|a_n] = (-1)^{Σ (n-i)|a_i|} s a_1 ⊗ … ⊗ s a_n
inline int suspension_sign(const std::vector<Mask>& w) {
  int e = 0, n = (int)w.size();
  for (int i = 0; i < n; ++i) e += (n - 1 - i) * popcount(w[i]);
  return sgn(e);
}

// ∂ on the desuspended tensor a_1⊗…⊗a_n⊗b: internal boundary of each factor plus, for every
// letter x of a later factor, the derivation ad_x on all earlier factors. Terms that empty one
// of a_1..a_n are degenerate and dropped.
inline std::vector<std::pair<std::vector<Mask>, Q>> tensor_boundary(const LieAlgebra& L,
                                                                    const std::vector<Mask>& f,
                                                                    const IndexedBasis<Mask>& ext,
                                                                    bool normalized = true) {
  int nf = (int)f.size();
  std::vector<std::pair<std::vector<Mask>, Q>> out;
  int before = 0;  // total degree of earlier factors
  for (int j = 0; j < nf; ++j) {
    for (auto& [idx, q] : cce_boundary(L, f[j], ext)) {
      auto t = f;
      t[j] = ext.key(idx);
      out.emplace_back(std::move(t), q * sgn(before));
    }
    before += popcount(f[j]);
  }
  // letters in global order: factor by factor, increasing index
  int pos = 0;
  for (int j = 0; j < nf; ++j)
    for (int x : mask_bits(f[j])) {
      ++pos;
      if (j == 0) continue;
      std::vector<Mask> rest = f;
      rest[j] &= ~(Mask(1) << x);
      if (normalized && j < nf - 1 && rest[j] == 0) continue;
      int s_q = sgn(pos);
      // ad_x as a derivation on factors 0..j-1 of `rest` (degree 0: only wedge reordering signs)
      for (int i = 0; i < j; ++i)
        for (int y : mask_bits(rest[i])) {
          Mask r = rest[i] & ~(Mask(1) << y);
          int s0 = wedge_sign(Mask(1) << y, r);
          for (auto& [l, c] : L.c[x][y]) {
            int s1 = wedge_sign(Mask(1) << l, r);
            if (!s1) continue;
            auto t = rest;
            t[i] = r | (Mask(1) << l);
            out.emplace_back(std::move(t), c * (s_q * s0 * s1));
          }
        }
    }
  return out;
}

}  // namespace detail

inline RelativeBar relative_bar(const LieAlgebra& L, int max_degree) {
  int n = L.dim();
  RelativeBar R;
  R.max_degree = max_degree;
  std::vector<std::string> sn;
  for (auto& b : L.basis) sn.push_back("s" + b);
  std::vector<std::tuple<RelativeBar::Key, int, std::string>> items;
  for (auto& w : detail::bar_words(n, max_degree))
    for (Mask b = 0; b < (Mask(1) << n); ++b) {
      int deg = RelativeBar::word_degree(w) + popcount(b);
      if (deg > max_degree) continue;
      std::string lab = "[";
      for (size_t i = 0; i < w.size(); ++i) lab += (i ? "|" : "") + monomial_label(w[i], sn);
      items.emplace_back(RelativeBar::Key{w, b}, deg, lab + "]" + monomial_label(b, sn));
    }
  R.basis = make_basis(std::move(items));
  const auto& B = R.basis;
  int N = B.dim();
  ExteriorCoalgebra ext = exterior_coalgebra(std::vector<int>(n, 1), sn, n);

  // coproduct of the normalized simplicial coalgebra (Alexander–Whitney):
  //   [a_1|…|a_n]⊗b ↦ Σ_p Σ ± [a_1|…|a_p] ⊗ a'_{p+1}…a'_n b'  ⊗  [a''_{p+1}|…|a''_n] ⊗ b''
  // over coproduct terms a_i = a'_i a''_i with a''_i nonempty, signs by the Koszul rule
  R.coalg.space = B.space;
  R.coalg.unit = B.at({{}, 0});
  R.coalg.top = max_degree;
  R.coalg.delta.resize(N);
  for (int x = 0; x < N; ++x) {
    auto& [w, b] = B.key(x);
    int nw = (int)w.size();
    for (int p = 0; p <= nw; ++p) {
      std::vector<Mask> w1(w.begin(), w.begin() + p), w2(nw - p);
      std::vector<Mask> front(nw - p + 1);
      // enumerate a'_i ⊊ a_i for i >= p, and b' ⊆ b
      std::function<void(int)> rec = [&](int i) {
        if (i < nw) {
          for_each_submask(w[i], [&](Mask a1) {
            if (a1 == w[i]) return;
            front[i - p] = a1;
            w2[i - p] = w[i] & ~a1;
            rec(i + 1);
          });
          return;
        }
        for_each_submask(b, [&](Mask b1) {
          front[nw - p] = b1;
          int s = wedge_sign(b1, b & ~b1), e = 0;
          if (!s) return;
          // items in order a'_{p+1}, s a''_{p+1}, …, b', b''; left items are the a' and b'
          std::vector<std::pair<int, bool>> items;
          for (int k = 0; k < nw - p; ++k) {
            s *= wedge_sign(front[k], w2[k]);
            e += popcount(front[k]);  // s moved past a'
            items.push_back({popcount(front[k]), true});
            items.push_back({popcount(w2[k]) + 1, false});
          }
          items.push_back({popcount(b1), true});
          items.push_back({popcount(b & ~b1), false});
          int right = 0;
          for (auto& [deg, left] : items) {
            if (left) e += right * deg;
            else right += deg;
          }
          Mask prod = 0;
          for (Mask f : front) {
            int s2 = wedge_sign(prod, f);
            if (!s2) return;
            s *= s2;
            prod |= f;
          }
          if (!s) return;
          R.coalg.delta[x].emplace_back(B.at({w1, prod}), B.at({w2, b & ~b1}), Q(s * sgn(e)));
        });
      };
      rec(p);
    }
  }

  R.d_bar = matrix_from(N, N, [&](int x) {
    auto& [w, b] = B.key(x);
    VecBuilder v;
    int eps = 0;
    for (size_t i = 0; i + 1 < w.size(); ++i) {
      eps += popcount(w[i]) + 1;
      int s = wedge_sign(w[i], w[i + 1]);
      if (!s) continue;
      std::vector<Mask> w2;
      for (size_t j = 0; j < w.size(); ++j) {
        if (j == i + 1) continue;
        w2.push_back(j == i ? (w[i] | w[i + 1]) : w[j]);
      }
      v.add(B.at({w2, b}), Q(s * sgn(eps)));
    }
    return v.take();
  });

  R.cap = matrix_from(N, N, [&](int x) {
    auto& [w, b] = B.key(x);
    if (w.empty()) return SparseVec{};
    std::vector<Mask> w1(w.begin(), w.end() - 1);
    int s = wedge_sign(w.back(), b);
    if (!s) return SparseVec{};
    return SparseVec{{B.at({w1, w.back() | b}), Q(-s * sgn(RelativeBar::word_degree(w1)))}};
  });

  R.partial = matrix_from(N, N, [&](int x) {
    auto& [w, b] = B.key(x);
    std::vector<Mask> f = w;
    f.push_back(b);
    int s_in = detail::suspension_sign(w) * sgn((int)w.size());
    VecBuilder v;
    for (auto& [t, q] : detail::tensor_boundary(L, f, ext.basis)) {
      std::vector<Mask> w2(t.begin(), t.end() - 1);
      v.add(B.at({w2, t.back()}), q * (s_in * detail::suspension_sign(w2)));
    }
    return v.take();
  });

  CalculusModule& M = R.calc;
  M.space = B.space;
  M.d = R.d_bar + R.cap + R.partial;
  for (int y = 0; y < n; ++y) {
    M.lambda.push_back(matrix_from(N, N, [&](int x) {
      auto& [w, b] = B.key(x);
      VecBuilder v;
      for (size_t i = 0; i <= w.size(); ++i) {
        Mask m = i < w.size() ? w[i] : b;
        for (auto& [j, q] : ad_on_monomial(L, y, m, ext.basis)) {
          auto w2 = w;
          Mask b2 = b;
          (i < w.size() ? w2[i] : b2) = ext.basis.key(j);
          v.add(B.at({w2, b2}), q);
        }
      }
      return v.take();
    }));
    M.iota.push_back(matrix_from(N, N, [&](int x) {
      auto& [w, b] = B.key(x);
      int s = wedge_sign(b, Mask(1) << y);
      int idx = s ? B.find({w, b | (Mask(1) << y)}) : -1;
      return idx >= 0 ? SparseVec{{idx, Q(-s * sgn(B.space.degree(x)))}} : SparseVec{};
    }));
  }
  M.lo = -1;
  M.hi = max_degree;
  return R;
}

// ι = τ̄^S ⊗ Id : W' -> BΛ_∂,  u^α⊗b ↦ α! Σ_{distinct orderings} [s e_{a_1}|…|s e_{a_k}] ⊗ b
inline SparseMatrix iota_map(const WeilCoalgebra& W, const RelativeBar& R) {
  return matrix_from(R.basis.dim(), W.basis.dim(), [&](int x) {
    auto& [a, b] = W.basis.key(x);
    std::vector<int> seq;
    for (int i = 0; i < (int)a.size(); ++i)
      for (int k = 0; k < a[i]; ++k) seq.push_back(i);
    Q c = Q(multi_factorial(a));
    VecBuilder v;
    do {
      std::vector<Mask> w;
      for (int i : seq) w.push_back(Mask(1) << i);
      int idx = R.basis.find({w, b});
      if (idx < 0) throw truncation_error("iota_map: bar construction truncated below the Weil coalgebra");
      v.add(idx, c);
    } while (std::next_permutation(seq.begin(), seq.end()));
    return v.take();
  });
}

// ---------- truncated U[Cg] = Λ[sg] ⋊ U(g), PBW length <= 2 ----------

struct TruncatedUCg {
  using Key = std::pair<Mask, std::vector<int>>;  // (b, sorted PBW monomial)
  const LieAlgebra* L = nullptr;
  IndexedBasis<Key> basis;
  IndexedBasis<Mask> ext;
  Algebra alg;
};

namespace detail {

using UElem = std::map<TruncatedUCg::Key, Q>;

inline void add_to(UElem& e, const TruncatedUCg::Key& k, const Q& q) {
  if (q == 0) return;
  auto [it, fresh] = e.try_emplace(k, q);
  if (!fresh) {
    it->second += q;
    if (it->second == 0) e.erase(it);
  }
}

// normal-ordered product of PBW monomials of total length <= 2
inline std::vector<std::pair<std::vector<int>, Q>> pbw_product(const LieAlgebra& L, const std::vector<int>& u,
                                                               const std::vector<int>& v) {
  if (u.size() + v.size() > 2) throw truncation_error("U(g) product beyond PBW length 2");
  if (u.empty()) return {{v, Q(1)}};
  if (v.empty()) return {{u, Q(1)}};
  int x = u[0], y = v[0];
  if (x <= y) return {{{x, y}, Q(1)}};
  std::vector<std::pair<std::vector<int>, Q>> out{{{y, x}, Q(1)}};
  for (auto& [l, q] : L.c[x][y]) out.push_back({{l}, q});
  return out;
}

// Δ(u) for PBW monomials of length <= 2 (all generators primitive)
inline std::vector<std::pair<std::vector<int>, std::vector<int>>> pbw_coproduct(const std::vector<int>& u) {
  using V = std::vector<int>;
  if (u.empty()) return {{V{}, V{}}};
  if (u.size() == 1) return {{u, V{}}, {V{}, u}};
  return {{u, V{}}, {V{u[0]}, V{u[1]}}, {V{u[1]}, V{u[0]}}, {V{}, u}};
}

}  // namespace detail

inline TruncatedUCg truncated_ucg(const LieAlgebra& L) {
  int n = L.dim();
  TruncatedUCg U;
  U.L = &L;
  std::vector<std::string> sn;
  for (auto& b : L.basis) sn.push_back("s" + b);
  ExteriorCoalgebra ex = exterior_coalgebra(std::vector<int>(n, 1), sn, n);
  U.ext = ex.basis;
  std::vector<std::vector<int>> pbw{{}};
  for (int i = 0; i < n; ++i) pbw.push_back({i});
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) pbw.push_back({i, j});
  std::vector<std::tuple<TruncatedUCg::Key, int, std::string>> items;
  for (Mask b = 0; b < (Mask(1) << n); ++b)
    for (auto& u : pbw) {
      std::string lab = monomial_label(b, sn);
      for (int i : u) lab += "." + L.basis[i];
      items.emplace_back(TruncatedUCg::Key{b, u}, popcount(b), lab);
    }
  U.basis = make_basis(std::move(items));
  const auto* Lp = &L;
  const auto* B = &U.basis;
  const auto* E = &U.ext;
  // (b⊗u)(b'⊗u') = Σ b∧(u_(1)▷b') ⊗ u_(2)u'
  auto mult = [Lp, B, E](int i, int j) -> SparseVec {
    auto& [b1, u1] = B->key(i);
    auto& [b2, u2] = B->key(j);
    VecBuilder v;
    for (auto& [p, r] : detail::pbw_coproduct(u1)) {
      // p ▷ b2
      SparseVec act{{E->at(b2), Q(1)}};
      for (auto it = p.rbegin(); it != p.rend(); ++it) {
        VecBuilder nb;
        for (auto& [k, q] : act) nb.add(ad_on_monomial(*Lp, *it, E->key(k), *E), q);
        act = nb.take();
      }
      for (auto& [k, q] : act) {
        Mask m = E->key(k);
        int s = wedge_sign(b1, m);
        if (!s) continue;
        for (auto& [w, q2] : detail::pbw_product(*Lp, r, u2)) v.add(B->at({b1 | m, w}), q * q2 * s);
      }
    }
    return v.take();
  };
  U.alg.space = U.basis.space;
  U.alg.unit = U.basis.at({0, {}});
  U.alg.mult = mult;
  int N = U.basis.dim();
  // d(sY) = Y extended as a derivation: d(sY_1…sY_k ⊗ u) = Σ (-1)^{i-1} (…)·Y_i·(…) ⊗ u;
  // only defined where the result stays within PBW length 2
  U.alg.d = matrix_from(N, N, [&](int x) {
    auto& [b, u] = U.basis.key(x);
    std::vector<int> ys = mask_bits(b);
    VecBuilder v;
    for (size_t i = 0; i < ys.size(); ++i) {
      Mask pre = 0, post = 0;
      for (size_t j = 0; j < ys.size(); ++j)
        (j < i ? pre : post) |= j == i ? 0 : (Mask(1) << ys[j]);
      if (u.size() + 1 > 2) return SparseVec{};
      SparseVec t = mult(U.basis.at({pre, {}}), U.basis.at({0, {ys[i]}}));
      VecBuilder t2;
      for (auto& [k, q] : t) t2.add(mult(k, U.basis.at({post, {}})), q);
      for (auto& [k, q] : t2.take()) v.add(mult(k, U.basis.at({0, u})), q * sgn((int)i));
    }
    return v.take();
  });
  return U;
}

// τ^B̄ + τ_g : BΛ_∂ -> U[Cg];  [a]⊗1 ↦ a,  []⊗s x ↦ x
inline SparseMatrix bar_twisting_cochain(const RelativeBar& R, const TruncatedUCg& U) {
  return matrix_from(U.basis.dim(), R.basis.dim(), [&](int x) {
    auto& [w, b] = R.basis.key(x);
    if (w.size() == 1 && b == 0) return SparseVec{{U.basis.at({w[0], {}}), Q(1)}};
    if (w.empty() && popcount(b) == 1) return SparseVec{{U.basis.at({0, {std::countr_zero(b)}}), Q(1)}};
    return SparseVec{};
  });
}

// τ_g : Λ'_∂[sg] -> U(g), s x ↦ x, into the b = 1 part of the truncated U[Cg]
inline SparseMatrix lie_twisting_cochain(const CCE& c, const TruncatedUCg& U) {
  return matrix_from(U.basis.dim(), c.ext.basis.dim(), [&](int x) {
    Mask m = c.ext.basis.key(x);
    if (popcount(m) != 1) return SparseVec{};
    return SparseVec{{U.basis.at({0, {std::countr_zero(m)}}), Q(1)}};
  });
}

}  // namespace dgx
