#pragma once

#include "lie.hpp"
#include "twisting.hpp"

namespace dgx {

// W'[g] = S[s²g] ⊗ Λ'[sg], basis u^α ⊗ b with u_a = s²e_a of degree 2.
//   d(u^α⊗b) = -Σ_a α_a u^{α-e_a} ⊗ (s e_a ∧ b)
//   ∂(u^α⊗s x_1…s x_k) = u^α⊗∂_Λ(…) + Σ_i (-1)^{i-1} (u^α·x_i) ⊗ (… without i …)
// where u·x is the derivation u_Y ↦ u_[Y,x]. Left operators: λ_Y = ad_Y on every
// generator, i_Y(u⊗b) = -u⊗(sY∧b).
struct WeilCoalgebra {
  using Key = std::pair<Exps, Mask>;
  int max_degree = 0;
  IndexedBasis<Key> basis;
  Coalgebra coalg;
  SparseMatrix d_koszul, partial;
  CalculusModule calc;  // differential D = d + ∂

  int weight(int i) const { return dgx::weight(basis.key(i).first); }
};

namespace detail {

// u^α·x, the derivation extending u_a ↦ Σ_l c_{a x}^l u_l
inline std::vector<std::pair<Exps, Q>> sym_right_ad(const LieAlgebra& L, const Exps& a, int x) {
  std::vector<std::pair<Exps, Q>> out;
  for (int i = 0; i < (int)a.size(); ++i) {
    if (!a[i]) continue;
    for (auto& [l, q] : L.c[i][x]) {
      Exps b = a;
      b[i] -= 1;
      b[l] += 1;
      out.emplace_back(b, Q(a[i]) * q);
    }
  }
  return out;
}

}  // namespace detail

inline WeilCoalgebra weil_coalgebra(const LieAlgebra& L, int max_degree) {
  int n = L.dim();
  WeilCoalgebra W;
  W.max_degree = max_degree;
  std::vector<std::string> un, sn;
  for (auto& b : L.basis) {
    un.push_back("u" + b);
    sn.push_back("s" + b);
  }
  std::vector<std::tuple<WeilCoalgebra::Key, int, std::string>> items;
  for (auto& a : exponent_vectors(std::vector<int>(n, 2), max_degree))
    for (Mask m = 0; m < (Mask(1) << n); ++m) {
      int deg = 2 * weight(a) + popcount(m);
      if (deg <= max_degree) items.emplace_back(WeilCoalgebra::Key{a, m}, deg, exps_label(a, un) + "|" + monomial_label(m, sn));
    }
  std::stable_sort(items.begin(), items.end(), [](const auto& x, const auto& y) {
    const auto &kx = std::get<0>(x), &ky = std::get<0>(y);
    if (weight(kx.first) != weight(ky.first)) return weight(kx.first) < weight(ky.first);
    if (kx.first != ky.first) return kx.first > ky.first;
    return popcount(kx.second) != popcount(ky.second) ? popcount(kx.second) < popcount(ky.second) : kx.second < ky.second;
  });
  W.basis = make_basis(std::move(items));
  const auto& B = W.basis;
  int N = B.dim();

  W.coalg.space = B.space;
  W.coalg.unit = B.at({Exps(n, 0), 0});
  W.coalg.top = max_degree;
  W.coalg.delta.resize(N);
  for (int x = 0; x < N; ++x) {
    auto& [a, m] = B.key(x);
    for (auto& b : exponent_vectors(std::vector<int>(n, 2), 2 * weight(a))) {
      Exps rest(n);
      Z c = 1;
      bool ok = true;
      for (int i = 0; i < n && ok; ++i) {
        if (b[i] > a[i]) ok = false;
        else {
          c *= binom(a[i], b[i]);
          rest[i] = a[i] - b[i];
        }
      }
      if (!ok) continue;
      for_each_submask(m, [&](Mask s) {
        // (u'⊗u'')⊗(b'⊗b'') reordered to (u'⊗b')⊗(u''⊗b''): u'' is even, no sign
        W.coalg.delta[x].emplace_back(B.at({b, s}), B.at({rest, m & ~s}), Q(c) * wedge_sign(s, m & ~s));
      });
    }
  }

  W.d_koszul = matrix_from(N, N, [&](int x) {
    auto& [a, m] = B.key(x);
    VecBuilder v;
    for (int i = 0; i < n; ++i) {
      if (!a[i]) continue;
      int s = wedge_sign(Mask(1) << i, m);
      if (!s) continue;
      Exps a2 = a;
      a2[i] -= 1;
      v.add(B.at({a2, m | (Mask(1) << i)}), Q(-s * a[i]));
    }
    return v.take();
  });

  ExteriorCoalgebra ext = exterior_coalgebra(std::vector<int>(n, 1), sn, n);
  W.partial = matrix_from(N, N, [&](int x) {
    auto& [a, m] = B.key(x);
    VecBuilder v;
    for (auto& [j, q] : cce_boundary(L, m, ext.basis)) v.add(B.at({a, ext.basis.key(j)}), q);
    std::vector<int> xs = mask_bits(m);
    for (size_t i = 0; i < xs.size(); ++i) {
      Mask rest = m & ~(Mask(1) << xs[i]);
      for (auto& [a2, q] : detail::sym_right_ad(L, a, xs[i])) v.add(B.at({a2, rest}), q * sgn((int)i));
    }
    return v.take();
  });

  CalculusModule& M = W.calc;
  M.space = B.space;
  M.d = W.d_koszul + W.partial;
  for (int y = 0; y < n; ++y) {
    M.lambda.push_back(matrix_from(N, N, [&](int x) {
      auto& [a, m] = B.key(x);
      VecBuilder v;
      // λ_Y = -(·Y): on u this is minus the right derivation u_a ↦ u_[a,Y]
      for (auto& [a2, q] : detail::sym_right_ad(L, a, y)) v.add(B.at({a2, m}), -q);
      for (auto& [j, q] : ad_on_monomial(L, y, m, ext.basis)) v.add(B.at({a, ext.basis.key(j)}), q);
      return v.take();
    }));
    M.iota.push_back(matrix_from(N, N, [&](int x) {
      auto& [a, m] = B.key(x);
      int s = wedge_sign(Mask(1) << y, m);
      int idx = s ? B.find({a, m | (Mask(1) << y)}) : -1;
      return idx >= 0 ? SparseVec{{idx, Q(-s)}} : SparseVec{};
    }));
  }
  M.lo = -1;
  M.hi = max_degree;
  return W;
}

// τ^S : S[s²g] -> Λ[sg], s²e_a ↦ s e_a and zero off the cogenerators
inline SparseMatrix symmetric_twisting_cochain(const SymmetricCoalgebra& S, const ExteriorCoalgebra& E) {
  return matrix_from(E.basis.dim(), S.basis.dim(), [&](int x) {
    const Exps& a = S.basis.key(x);
    if (weight(a) != 1) return SparseVec{};
    int i = (int)(std::find(a.begin(), a.end(), 1) - a.begin());
    return SparseVec{{E.basis.at(Mask(1) << i), Q(1)}};
  });
}

// ---------- abelian case: the Koszul complex Λ'[sg] ⊗ S'[s²g] ----------

struct KoszulComplex {
  IndexedBasis<std::pair<Mask, Exps>> basis;
  ChainComplex complex;  // κ(b⊗u^α) = Σ α_a (b∧s e_a) ⊗ u^{α-e_a}
};

inline KoszulComplex koszul_complex(int n, int max_degree) {
  KoszulComplex K;
  std::vector<std::tuple<std::pair<Mask, Exps>, int, std::string>> items;
  for (auto& a : exponent_vectors(std::vector<int>(n, 2), max_degree))
    for (Mask m = 0; m < (Mask(1) << n); ++m) {
      int deg = 2 * weight(a) + popcount(m);
      if (deg <= max_degree) items.emplace_back(std::pair{m, a}, deg, std::to_string(m) + "|" + std::to_string(weight(a)));
    }
  K.basis = make_basis(std::move(items));
  const auto& B = K.basis;
  int N = B.dim();
  SparseMatrix kappa = matrix_from(N, N, [&](int x) {
    auto& [m, a] = B.key(x);
    VecBuilder v;
    for (int i = 0; i < n; ++i) {
      if (!a[i]) continue;
      int s = wedge_sign(m, Mask(1) << i);
      if (!s) continue;
      Exps a2 = a;
      a2[i] -= 1;
      v.add(B.at({m | (Mask(1) << i), a2}), Q(s * a[i]));
    }
    return v.take();
  });
  K.complex = ChainComplex(B.space, kappa, -1, max_degree);
  return K;
}

// φ(u^α⊗b) = (-1)^{|b|(|b|+1)/2} b⊗u^α; returns the number of nonzero entries of κφ - φD
inline size_t abelian_koszul_iso_residual(const WeilCoalgebra& W, const KoszulComplex& K) {
  int N = W.basis.dim();
  SparseMatrix phi = matrix_from(K.basis.dim(), N, [&](int x) {
    auto& [a, m] = W.basis.key(x);
    int k = popcount(m);
    return SparseVec{{K.basis.at({m, a}), Q(sgn(k * (k + 1) / 2))}};
  });
  if (K.basis.dim() != N) return (size_t)-1;
  SparseMatrix r = K.complex.d * phi - phi * W.calc.d;
  return r.nnz();
}

// Weil coalgebra as a cochain-free check: H_j(W') for 1 <= j <= upto
inline std::vector<int> weil_homology(const WeilCoalgebra& W, int upto) {
  ChainComplex c = W.calc.complex();
  std::vector<int> out;
  for (int j = 0; j <= upto; ++j) out.push_back(c.homology_dimension(j));
  return out;
}

}  // namespace dgx
