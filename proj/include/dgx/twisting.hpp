#pragma once

#include "coalgebra.hpp"

#include <algorithm>
#include <numeric>

namespace dgx {

// Finite-dimensional (possibly truncated) graded algebra on a flat basis.
struct Algebra {
  GradedVectorSpace space;
  int unit = -1;
  SparseMatrix d;  // degree -1; zero matrix when the algebra carries no differential
  std::function<SparseVec(int, int)> mult;

  SparseVec product(const SparseVec& x, const SparseVec& y) const {
    VecBuilder b;
    for (auto& [i, p] : x)
      for (auto& [j, q] : y) b.add(mult(i, j), p * q);
    return b.take();
  }
};

// exterior algebra on odd generators, with product ∧ and no differential
inline Algebra exterior_algebra(const ExteriorCoalgebra& e) {
  Algebra A;
  A.space = e.basis.space;
  A.unit = e.basis.at(0);
  A.d = SparseMatrix(A.space.dim(), A.space.dim());
  const auto* basis = &e.basis;
  A.mult = [basis](int i, int j) -> SparseVec {
    Mask a = basis->key(i), b = basis->key(j);
    int s = wedge_sign(a, b);
    if (!s) return {};
    int k = basis->find(a | b);
    if (k < 0) throw truncation_error("exterior product beyond stored degree");
    return {{k, Q(s)}};
  };
  return A;
}

// (f ∪ g)(c) = Σ (-1)^{|g||c'|} f(c') g(c''), f,g : C -> A given as matrices
inline SparseMatrix cup(const Coalgebra& C, const Algebra& A, const SparseMatrix& f, const SparseMatrix& g, int gdeg) {
  std::vector<SparseVec> cols(C.space.dim());
  for (int c = 0; c < C.space.dim(); ++c) {
    VecBuilder b;
    for (auto& [a, bb, q] : C.delta[c]) {
      if (f.col(a).empty() || g.col(bb).empty()) continue;
      b.add(A.product(f.col(a), g.col(bb)), q * sgn(gdeg * C.space.degree(a)));
    }
    cols[c] = b.take();
  }
  return SparseMatrix::from_columns(A.space.dim(), std::move(cols));
}

// D f = d_A f - (-1)^{|f|} f d_C
inline SparseMatrix hom_differential(const SparseMatrix& dC, const SparseMatrix& dA, const SparseMatrix& f, int fdeg) {
  return dA * f - (f * dC).scaled_by(Q(sgn(fdeg)));
}

struct MasterResidual {
  size_t entries = 0;
  int witness = -1;  // a basis element of C where D tau != tau ∪ tau
};

// D τ = τ ∪ τ for |τ| = -1, checked on basis elements of C of degree <= upto
inline MasterResidual master_equation_residual(const Coalgebra& C, const SparseMatrix& dC, const Algebra& A,
                                               const SparseMatrix& tau, int upto) {
  SparseMatrix r = hom_differential(dC, A.d, tau, -1) - cup(C, A, tau, tau, -1);
  MasterResidual out;
  for (int c = 0; c < r.cols(); ++c) {
    if (C.space.degree(c) > upto) continue;
    if (!r.col(c).empty() && out.witness < 0) out.witness = c;
    out.entries += r.col(c).size();
  }
  return out;
}

// Dt - ½[t,t] with the graded commutator [f,g] = f∪g - (-1)^{|f||g|} g∪f; for |t| = -1 this
// agrees with Dτ - τ∪τ but is computed through the bracket
inline MasterResidual maurer_cartan_residual(const Coalgebra& C, const SparseMatrix& dC, const Algebra& A,
                                             const SparseMatrix& tau, int upto) {
  SparseMatrix tt = cup(C, A, tau, tau, -1);
  SparseMatrix br = tt + tt;  // -(-1)^{(-1)(-1)} = +1
  SparseMatrix r = hom_differential(dC, A.d, tau, -1) - br.scaled_by(Q(1, 2));
  MasterResidual out;
  for (int c = 0; c < r.cols(); ++c) {
    if (C.space.degree(c) > upto) continue;
    if (!r.col(c).empty() && out.witness < 0) out.witness = c;
    out.entries += r.col(c).size();
  }
  return out;
}

// Antipode of a connected graded bialgebra: S(1) = 1, S(x) = -x - Σ' S(x')x'' over the reduced
// coproduct. Requires the coproduct of (C, A) to live on the same flat basis.
inline SparseMatrix antipode(const Coalgebra& C, const Algebra& A) {
  int n = C.space.dim();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return C.space.degree(a) < C.space.degree(b); });
  std::vector<SparseVec> S(n);
  for (int x : order) {
    if (x == C.unit) {
      S[x] = {{x, Q(1)}};
      continue;
    }
    VecBuilder v;
    v.add(x, Q(-1));
    for (auto& [a, b, q] : C.delta[x]) {
      if (a == x || a == C.unit || b == C.unit) continue;
      v.add(A.product(S[a], {{b, Q(1)}}), -q);
    }
    S[x] = v.take();
  }
  return SparseMatrix::from_columns(n, std::move(S));
}

// μ(S⊗id)Δ - ηε: number of basis elements where the antipode law fails
inline int antipode_residual(const Coalgebra& C, const Algebra& A, const SparseMatrix& S) {
  int bad = 0;
  for (int x = 0; x < C.space.dim(); ++x) {
    VecBuilder v;
    for (auto& [a, b, q] : C.delta[x]) v.add(A.product(S.col(a), {{b, Q(1)}}), q);
    if (x == C.unit) v.add(x, Q(-1));
    if (!v.take().empty()) ++bad;
  }
  return bad;
}

// ---------- tensor products with the Koszul sign rule ----------

struct TensorProduct {
  IndexedBasis<std::pair<int, int>> basis;
  Coalgebra coalg;  // Δ(a⊗b) = Σ (-1)^{|a''||b'|} (a'⊗b')⊗(a''⊗b'')
  Algebra alg;      // (a⊗b)(a'⊗b') = (-1)^{|b||a'|} aa'⊗bb' (only when both factors are algebras)
};

inline TensorProduct koszul_sign_tensor(const Coalgebra& A, const Coalgebra& B, const Algebra* Aa = nullptr,
                                        const Algebra* Ba = nullptr) {
  TensorProduct T;
  std::vector<std::tuple<std::pair<int, int>, int, std::string>> items;
  int top = std::min(A.top, B.top);
  for (int a = 0; a < A.space.dim(); ++a)
    for (int b = 0; b < B.space.dim(); ++b) {
      int d = A.space.degree(a) + B.space.degree(b);
      if (d <= top) items.emplace_back(std::pair{a, b}, d, A.space.label(a) + " (x) " + B.space.label(b));
    }
  T.basis = make_basis(std::move(items));
  const auto& TB = T.basis;
  T.coalg.space = TB.space;
  T.coalg.unit = TB.at({A.unit, B.unit});
  T.coalg.top = top;
  T.coalg.delta.resize(TB.dim());
  for (int x = 0; x < TB.dim(); ++x) {
    auto [a, b] = TB.key(x);
    for (auto& [a1, a2, p] : A.delta[a])
      for (auto& [b1, b2, q] : B.delta[b]) {
        int l = TB.find({a1, b1}), r = TB.find({a2, b2});
        if (l < 0 || r < 0) continue;
        T.coalg.delta[x].emplace_back(l, r, p * q * sgn(A.space.degree(a2) * B.space.degree(b1)));
      }
  }
  if (Aa && Ba) {
    T.alg.space = TB.space;
    T.alg.unit = T.coalg.unit;
    T.alg.d = SparseMatrix(TB.dim(), TB.dim());
    const auto* basis = &T.basis;
    T.alg.mult = [basis, Aa, Ba](int i, int j) -> SparseVec {
      auto [a, b] = basis->key(i);
      auto [a2, b2] = basis->key(j);
      int s = sgn(Ba->space.degree(b) * Aa->space.degree(a2));
      SparseVec pa = Aa->product({{a, Q(1)}}, {{a2, Q(1)}}), pb = Ba->product({{b, Q(1)}}, {{b2, Q(1)}});
      VecBuilder v;
      for (auto& [k, p] : pa)
        for (auto& [l, q] : pb) {
          int y = basis->find({k, l});
          if (y < 0) throw truncation_error("tensor product beyond stored degree");
          v.add(y, p * q * s);
        }
      return v.take();
    };
  }
  return T;
}

// ---------- twisted tensor products and twisted Hom ----------

// Right action data: act[c] is the matrix of n ↦ n·τ(c) on N (degree |c|-1).
using ActionByCochain = std::vector<SparseMatrix>;

// C ⊗_τ M with d(c⊗m) = dc⊗m + (-1)^{|c|} c⊗dm + sign_tw Σ (-1)^{|c'|} c'⊗τ(c'')·m,
// where left[c] is the matrix of m ↦ τ(c)·m.
inline SparseMatrix twisted_tensor_differential(const Coalgebra& C, const SparseMatrix& dC,
                                                const IndexedBasis<std::pair<int, int>>& basis, const SparseMatrix& dM,
                                                const ActionByCochain& left, int sign_tw) {
  std::vector<Triplet> ts;
  for (int x = 0; x < basis.dim(); ++x) {
    auto [c, m] = basis.key(x);
    for (auto& [c2, q] : dC.col(c)) {
      int y = basis.find({c2, m});
      if (y >= 0) ts.emplace_back(y, x, q);
    }
    int s = sgn(C.space.degree(c));
    for (auto& [m2, q] : dM.col(m)) {
      int y = basis.find({c, m2});
      if (y >= 0) ts.emplace_back(y, x, s * q);
    }
    for (auto& [a, b, q] : C.delta[c]) {
      int s2 = sign_tw * sgn(C.space.degree(a));
      for (auto& [m2, q2] : left[b].col(m)) {
        int y = basis.find({a, m2});
        if (y >= 0) ts.emplace_back(y, x, s2 * q * q2);
      }
    }
  }
  return SparseMatrix::from_triplets(basis.dim(), basis.dim(), ts);
}

// Hom^τ(C, N): δ f = D f + (-1)^{|f|} f ∪ τ, with (f∪τ)(c) = Σ (-1)^{|c'|} f(c')·τ(c'').
// Basis key (c, n) is the map e_c ↦ e_n.
inline SparseMatrix twisted_hom_differential(const Coalgebra& C, const SparseMatrix& dC,
                                             const IndexedBasis<std::pair<int, int>>& basis,
                                             const GradedVectorSpace& N, const SparseMatrix& dN,
                                             const ActionByCochain& right) {
  // for f = (a -> n): contributions at every c with a term a⊗b in Δ(c)
  std::vector<std::vector<std::tuple<int, int, Q>>> cop_by_left(C.space.dim());  // a -> (c, b, q)
  for (int c = 0; c < C.space.dim(); ++c)
    for (auto& [a, b, q] : C.delta[c]) cop_by_left[a].emplace_back(c, b, q);
  SparseMatrix dCt = dC.transpose();
  std::vector<Triplet> ts;
  for (int x = 0; x < basis.dim(); ++x) {
    auto [a, n] = basis.key(x);
    int fdeg = N.degree(n) - C.space.degree(a);
    for (auto& [n2, q] : dN.col(n)) {
      int y = basis.find({a, n2});
      if (y >= 0) ts.emplace_back(y, x, q);
    }
    // -(-1)^{|f|} f∘d_C : (f d_C)(e_c) = d_C[a, c] e_n
    for (auto& [c, q] : dCt.col(a)) {
      int y = basis.find({c, n});
      if (y >= 0) ts.emplace_back(y, x, -sgn(fdeg) * q);
    }
    for (auto& [c, b, q] : cop_by_left[a]) {
      int s = sgn(fdeg) * sgn(C.space.degree(a));
      for (auto& [n2, q2] : right[b].col(n)) {
        int y = basis.find({c, n2});
        if (y >= 0) ts.emplace_back(y, x, s * q * q2);
      }
    }
  }
  return SparseMatrix::from_triplets(basis.dim(), basis.dim(), ts);
}

// Hom basis of maps C_p -> N_q with cochain degree p + (-deg N) in [0, max_cochain]
inline IndexedBasis<std::pair<int, int>> hom_basis(const GradedVectorSpace& C, const GradedVectorSpace& N,
                                                   int max_cochain) {
  std::vector<std::tuple<std::pair<int, int>, int, std::string>> items;
  for (int c = 0; c < C.dim(); ++c)
    for (int n = 0; n < N.dim(); ++n) {
      int hdeg = N.degree(n) - C.degree(c);
      if (-hdeg <= max_cochain) items.emplace_back(std::pair{c, n}, hdeg, C.label(c) + " -> " + N.label(n));
    }
  return make_basis(std::move(items));
}

}  // namespace dgx
