#pragma once

#include "bar.hpp"
#include "contraction.hpp"

namespace dgx {

// Equivariant models of Ext_(Cg,g)(Q, V). Complexes are cochain complexes stored with
// homological degree = -(cochain degree); `dims[k]` is the cohomology in cochain degree k.
struct ModelResult {
  std::string model;
  ChainComplex complex;
  int trusted_hi = 0;  // cochain degrees 0..trusted_hi are exact
  std::vector<int> dims;
};

inline std::vector<int> cochain_dims(const ChainComplex& c, int upto) {
  std::vector<int> out;
  for (int k = 0; k <= upto; ++k) out.push_back(c.homology_dimension(-k));
  return out;
}

inline int max_hom_degree(const CalculusModule& V) { return V.dim() ? std::max(0, V.space.max_degree()) : 0; }

// S[s²g] as a calculus module: λ_Y is the restriction of W'[g]'s λ_Y to b = 1, no i, no d
struct SymmetricModule {
  SymmetricCoalgebra S;
  CalculusModule calc;
};

inline SymmetricModule symmetric_module(const LieAlgebra& L, int max_degree) {
  int n = L.dim();
  SymmetricModule R;
  std::vector<std::string> un;
  for (auto& b : L.basis) un.push_back("u" + b);
  R.S = symmetric_coalgebra(std::vector<int>(n, 2), un, max_degree);
  const auto& B = R.S.basis;
  int N = B.dim();
  R.calc.space = B.space;
  R.calc.d = SparseMatrix(N, N);
  for (int y = 0; y < n; ++y) {
    R.calc.lambda.push_back(matrix_from(N, N, [&](int x) {
      VecBuilder v;
      for (auto& [a2, q] : detail::sym_right_ad(L, B.key(x), y)) v.add(B.at(a2), -q);
      return v.take();
    }));
    R.calc.iota.push_back(SparseMatrix(N, N));
  }
  R.calc.lo = -1;
  R.calc.hi = max_degree;
  return R;
}

// matrix of v ↦ v·(s y_1 … s y_k) for an exterior monomial, y_1 < … < y_k
inline SparseMatrix right_monomial_action(const CalculusModule& V, Mask b) {
  SparseMatrix m = SparseMatrix::identity(V.dim());
  for (int y : mask_bits(b)) m = V.right_s(y) * m;
  return m;
}

// ---------- coefficient modules ----------

// CE cochains Alt(K) = ΛK* with the coadjoint calculus of K
inline CalculusModule forms_module(const LieAlgebra& K) { return cochains(K, trivial_module(K.dim())).calc; }

// pull a K-calculus back along φ : g -> K (φ is dim K x dim g)
inline CalculusModule restrict_calculus(const CalculusModule& VK, const SparseMatrix& phi) {
  CalculusModule V;
  V.space = VK.space;
  V.d = VK.d;
  V.lo = VK.lo, V.hi = VK.hi;
  for (int y = 0; y < phi.cols(); ++y) {
    SparseMatrix lam(VK.dim(), VK.dim()), io(VK.dim(), VK.dim());
    for (auto& [a, q] : phi.col(y)) {
      lam = lam + q * VK.lambda[a];
      io = io + q * VK.iota[a];
    }
    V.lambda.push_back(lam);
    V.iota.push_back(io);
  }
  return V;
}

// number of (x,y) with φ[x,y] != [φx,φy]
inline int lie_map_residual(const LieAlgebra& g, const LieAlgebra& K, const SparseMatrix& phi) {
  int bad = 0;
  for (int x = 0; x < g.dim(); ++x)
    for (int y = 0; y < g.dim(); ++y)
      if (phi.apply(g.c[x][y]) != K.bracket(phi.col(x), phi.col(y))) ++bad;
  return bad;
}

// ---------- Weil model Hom(W'[g], V)^{Cg} ----------

struct WeilModel {
  WeilCoalgebra W;
  IndexedBasis<std::pair<int, int>> basis;
  CalculusModule hom;
  Subspace invariants;
  ModelResult result;
};

inline WeilModel weil_model(const LieAlgebra& L, const CalculusModule& V, int max_degree) {
  WeilModel M;
  int top = max_degree + 1 + max_hom_degree(V);
  M.W = weil_coalgebra(L, top);
  int vmax = V.dim() ? V.space.max_degree() : 0;
  M.hom = hom(M.W.calc, V, -(max_degree + 1), vmax, -(max_degree + 1), vmax + 1, &M.basis);
  M.invariants = invariant_subspace(M.hom, true);
  M.result.model = "weil";
  M.result.complex = invariants_complex(M.hom.complex(), M.invariants);
  M.result.trusted_hi = max_degree;
  M.result.dims = cochain_dims(M.result.complex, max_degree);
  return M;
}

// ---------- bar model Hom(BΛ_∂[sg], V)^{Cg} ----------

struct BarModel {
  RelativeBar R;
  IndexedBasis<std::pair<int, int>> basis;
  CalculusModule hom;
  Subspace invariants;
  ModelResult result;
};

inline BarModel bar_model(const LieAlgebra& L, const CalculusModule& V, int max_degree) {
  BarModel M;
  int top = max_degree + 1 + max_hom_degree(V);
  M.R = relative_bar(L, top);
  int vmax = V.dim() ? V.space.max_degree() : 0;
  M.hom = hom(M.R.calc, V, -(max_degree + 1), vmax, -(max_degree + 1), vmax + 1, &M.basis);
  M.invariants = invariant_subspace(M.hom, true);
  M.result.model = "bar";
  M.result.complex = invariants_complex(M.hom.complex(), M.invariants);
  M.result.trusted_hi = max_degree;
  M.result.dims = cochain_dims(M.result.complex, max_degree);
  return M;
}

// ---------- Cartan model Hom^{τ^S}(S[s²g], V)^g ----------

struct CartanModel {
  SymmetricModule S;
  IndexedBasis<std::pair<int, int>> basis;
  CalculusModule hom;  // g-action on Hom(S, V); its d is the untwisted one
  SparseMatrix delta;  // twisted differential on Hom(S, V)
  Subspace invariants;
  ModelResult result;
};

inline CartanModel cartan_model(const LieAlgebra& L, const CalculusModule& V, int max_degree) {
  CartanModel M;
  int top = max_degree + 1 + max_hom_degree(V);
  M.S = symmetric_module(L, top);
  int vmax = V.dim() ? V.space.max_degree() : 0;
  M.hom = hom(M.S.calc, V, -(max_degree + 1), vmax, -(max_degree + 1), vmax + 1, &M.basis);
  const auto& SB = M.S.S.basis;
  ActionByCochain right(SB.dim(), SparseMatrix(V.dim(), V.dim()));
  for (int c = 0; c < SB.dim(); ++c)
    if (weight(SB.key(c)) == 1)
      for (int a = 0; a < L.dim(); ++a)
        if (SB.key(c)[a]) right[c] = V.right_s(a);
  M.delta = twisted_hom_differential(M.S.S.coalg, M.S.calc.d, M.basis, V.space, V.d, right);
  M.invariants = invariant_subspace(M.hom, false);
  M.result.model = "cartan";
  M.result.complex = subcomplex(ChainComplex(M.hom.space, M.delta, M.hom.lo, M.hom.hi), M.invariants);
  M.result.trusted_hi = max_degree;
  M.result.dims = cochain_dims(M.result.complex, max_degree);
  return M;
}

// α ↦ F_α,  F_α(u^a ⊗ b) = α(u^a)·b
struct CartanWeilComparison {
  SparseMatrix map;             // Hom(S, V) -> Hom(W', V)
  size_t chain_residual = 0;    // D_W F - F δ on Cartan invariants, trusted degrees
  size_t invariance_residual = 0;  // λ, i applied to F(Cartan invariants)
  bool injective = false;
  bool dims_equal = false;      // graded dims of the two invariant spaces on the trusted window
  bool ok() const { return !chain_residual && !invariance_residual && injective && dims_equal; }
};

inline CartanWeilComparison cartan_weil_map(const CartanModel& C, const WeilModel& W, const CalculusModule& V) {
  CartanWeilComparison R;
  const auto& SB = C.S.S.basis;
  const auto& WB = W.W.basis;
  std::map<Mask, SparseMatrix> act;
  for (int x = 0; x < WB.dim(); ++x) {
    Mask b = WB.key(x).second;
    if (!act.count(b)) act[b] = right_monomial_action(V, b);
  }
  // W' elements over each u^a
  std::map<Exps, std::vector<int>> over;
  for (int x = 0; x < WB.dim(); ++x) over[WB.key(x).first].push_back(x);
  R.map = matrix_from(W.basis.dim(), C.basis.dim(), [&](int f) {
    auto [c, n] = C.basis.key(f);
    VecBuilder v;
    for (int x : over[SB.key(c)])
      for (auto& [n2, q] : act[WB.key(x).second].col(n)) {
        int y = W.basis.find({x, n2});
        if (y >= 0) v.add(y, q);
      }
    return v.take();
  });
  int top = C.result.trusted_hi;
  SparseMatrix inc = C.invariants.inclusion();
  SparseMatrix Finc = R.map * inc;
  std::vector<int> cols;
  for (int k = 0; k < C.invariants.dim(); ++k)
    if (-C.hom.space.degree(C.invariants.coord[k]) <= top) cols.push_back(k);
  SparseMatrix Fi = Finc.select_cols(cols);
  R.chain_residual = (W.hom.d * Fi - R.map * C.delta * inc.select_cols(cols)).nnz();
  for (auto* ops : {&W.hom.lambda, &W.hom.iota})
    for (auto& f : *ops) R.invariance_residual += (f * Fi).nnz();
  R.injective = rank(Fi) == (int)cols.size();
  R.dims_equal = true;
  for (int k = 0; k <= top; ++k) {
    int a = 0, b = 0;
    for (int i = 0; i < C.invariants.dim(); ++i) a += C.hom.space.degree(C.invariants.coord[i]) == -k;
    for (int i = 0; i < W.invariants.dim(); ++i) b += W.hom.space.degree(W.invariants.coord[i]) == -k;
    if (a != b) R.dims_equal = false;
  }
  return R;
}

// ---------- dual standard construction ----------

// T(W) = Alt(g, W) uses only the g-action and d of W; the unit
// η(w) = Σ_I e^I ⊗ i_{I_k}…i_{I_1} w uses the full (Cg)-action.
inline SparseMatrix monad_unit(const LieAlgebra& L, const CalculusModule& W, const FormModule& T) {
  int n = L.dim();
  return matrix_from(T.basis.dim(), W.dim(), [&](int w) {
    VecBuilder v;
    for (Mask I = 0; I < (Mask(1) << n); ++I) {
      SparseVec z{{w, Q(1)}};
      for (int y : mask_bits(I)) z = W.iota[y].apply(z);
      for (auto& [w2, q] : z) {
        int x = T.basis.find({I, w2});
        if (x >= 0) v.add(x, q);
      }
    }
    return v.take();
  });
}

struct DualStandard {
  int levels = 0;
  std::vector<FormModule> X;                      // X_k = T^{k+1} V, cochain degrees <= levels - k
  std::vector<std::vector<SparseMatrix>> coface;  // coface[k][i] : X_{k-1} -> X_k, X_{-1} = V
  size_t unit_residual = 0;                       // η against d, λ, i at every level
  size_t cosimplicial_residual = 0;
  ModelResult result;
};

inline DualStandard dual_standard(const LieAlgebra& L, const CalculusModule& V, int levels) {
  if (levels < 1) throw input_error("dual standard construction needs at least one level");
  DualStandard D;
  D.levels = levels;
  for (int k = 0; k <= levels; ++k)
    D.X.push_back(cochains(L, k ? D.X[k - 1].calc : V, -1, -(levels - k)));
  D.coface.resize(levels + 1);
  // coface[0] = {η_V : V -> X_0} is the augmentation; it enters Tot only through T^i(η_V)
  D.coface[0].push_back(monad_unit(L, V, D.X[0]));
  for (int k = 1; k <= levels; ++k) {
    const FormModule& T = D.X[k];
    const CalculusModule& W = D.X[k - 1].calc;
    SparseMatrix eta = monad_unit(L, W, T);
    D.coface[k].push_back(eta);
    for (int i = 1; i <= k; ++i) {
      const SparseMatrix& inner = D.coface[k - 1][i - 1];
      const auto& src = D.X[k - 1].basis;
      D.coface[k].push_back(matrix_from(T.basis.dim(), src.dim(), [&](int x) {
        auto [I, w] = src.key(x);
        VecBuilder v;
        for (auto& [w2, q] : inner.col(w)) {
          int y = T.basis.find({I, w2});
          if (y >= 0) v.add(y, q);
        }
        return v.take();
      }));
    }
  }
  auto deg_cut = [&](const SparseMatrix& m, const GradedVectorSpace& src, int k) {
    size_t r = 0;
    for (int c = 0; c < m.cols(); ++c)
      if (-src.degree(c) <= levels - k) r += m.col(c).size();
    return r;
  };
  for (int k = 1; k <= levels; ++k) {
    const CalculusModule &T = D.X[k].calc, &W = D.X[k - 1].calc;
    const SparseMatrix& eta = D.coface[k][0];
    D.unit_residual += deg_cut(T.d * eta - eta * W.d, W.space, k);
    for (int y = 0; y < L.dim(); ++y)
      D.unit_residual += deg_cut(T.lambda[y] * eta - eta * W.lambda[y], W.space, k) +
                         deg_cut(T.iota[y] * eta - eta * W.iota[y], W.space, k);
  }
  for (int k = 2; k <= levels; ++k)
    for (int j = 1; j <= k; ++j)
      for (int i = 0; i < j; ++i)
        D.cosimplicial_residual +=
            deg_cut(D.coface[k][j] * D.coface[k - 1][i] - D.coface[k][i] * D.coface[k - 1][j - 1], D.X[k - 2].calc.space, k);

  // Tot: level k in total cochain degree k + internal, D = Σ(-1)^i δ^i + (-1)^k d
  std::vector<std::tuple<std::pair<int, int>, int, std::string>> items;
  for (int k = 0; k <= levels; ++k)
    for (int x = 0; x < D.X[k].basis.dim(); ++x)
      items.emplace_back(std::pair{k, x}, D.X[k].calc.space.degree(x) - k,
                         "[" + std::to_string(k) + "] " + D.X[k].calc.space.label(x));
  IndexedBasis<std::pair<int, int>> B = make_basis(std::move(items));
  int N = B.dim();
  CalculusModule tot;
  tot.space = B.space;
  tot.d = matrix_from(N, N, [&](int c) {
    auto [k, x] = B.key(c);
    VecBuilder v;
    for (auto& [y, q] : D.X[k].calc.d.col(x)) {
      int t = B.find({k, y});
      if (t >= 0) v.add(t, q * sgn(k));
    }
    if (k < levels)
      for (int i = 0; i <= k + 1; ++i)
        for (auto& [y, q] : D.coface[k + 1][i].col(x)) v.add(B.at({k + 1, y}), q * sgn(i));
    return v.take();
  });
  for (int y = 0; y < L.dim(); ++y)
    for (auto* ops : {&tot.lambda, &tot.iota}) {
      bool lam = ops == &tot.lambda;
      ops->push_back(matrix_from(N, N, [&](int c) {
        auto [k, x] = B.key(c);
        VecBuilder v;
        for (auto& [z, q] : (lam ? D.X[k].calc.lambda[y] : D.X[k].calc.iota[y]).col(x)) {
          int t = B.find({k, z});
          if (t >= 0) v.add(t, q);
        }
        return v.take();
      }));
    }
  tot.lo = -levels;
  tot.hi = max_hom_degree(V) + 1;
  D.result.model = "dual-standard";
  D.result.complex = subcomplex(tot.complex(), invariant_subspace(tot, true));
  D.result.trusted_hi = levels - 1;
  D.result.dims = cochain_dims(D.result.complex, levels - 1);
  return D;
}

// ---------- relative Tor: homology of W'[g] ⊗_{Cg} M ----------

struct TorResult {
  ChainComplex complex;
  int trusted_hi = 0;
  std::vector<int> dims;  // homological degrees 0..trusted_hi
};

inline TorResult relative_tor(const LieAlgebra& L, const CalculusModule& M, int max_degree) {
  int mmin = M.dim() ? std::min(0, M.space.min_degree()) : 0;
  WeilCoalgebra W = weil_coalgebra(L, max_degree + 1 - mmin);
  int lo = (M.dim() ? M.space.min_degree() : 0) - 1;
  CalculusModule T = tensor(W.calc, M, lo + 1, max_degree + 1, lo, max_degree + 1);
  TorResult R;
  R.complex = quotient_complex(T.complex(), coinvariant_relations(T));
  R.trusted_hi = max_degree;
  for (int j = 0; j <= max_degree; ++j) R.dims.push_back(R.complex.homology_dimension(j));
  return R;
}

}  // namespace dgx
