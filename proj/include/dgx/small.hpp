#pragma once

#include "models.hpp"

namespace dgx {

// Polynomial functions on g in the coordinates a_k (dual to e_k).
using Poly = std::map<Exps, Q>;

namespace detail {

inline IndexedBasis<Exps> poly_basis(int n, int m) {
  std::vector<std::tuple<Exps, int, std::string>> items;
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("a" + std::to_string(i + 1));
  for (auto& a : exponent_vectors(std::vector<int>(n, 1), m))
    if (weight(a) == m) items.emplace_back(a, m, exps_label(a, names));
  return make_basis(std::move(items));
}

inline Poly poly_mul(const Poly& p, const Poly& q) {
  Poly r;
  for (auto& [a, x] : p)
    for (auto& [b, y] : q) {
      Exps c = a;
      for (size_t i = 0; i < c.size(); ++i) c[i] += b[i];
      r[c] += x * y;
    }
  std::erase_if(r, [](const auto& e) { return e.second == 0; });
  return r;
}

inline SparseVec poly_vec(const IndexedBasis<Exps>& B, const Poly& p) {
  VecBuilder v;
  for (auto& [a, x] : p) v.add(B.at(a), x);
  return v.take();
}

inline Poly vec_poly(const IndexedBasis<Exps>& B, const SparseVec& v) {
  Poly p;
  for (auto& [i, x] : v) p[B.key(i)] = x;
  return p;
}

// coadjoint derivation Y·a_k = -Σ_j c_{Yj}^k a_j on polynomials of degree m
inline SparseMatrix coadjoint_on_polys(const LieAlgebra& L, int y, const IndexedBasis<Exps>& B) {
  int n = L.dim();
  return matrix_from(B.dim(), B.dim(), [&](int x) {
    const Exps& a = B.key(x);
    VecBuilder v;
    for (int k = 0; k < n; ++k) {
      if (!a[k]) continue;
      for (int j = 0; j < n; ++j) {
        Q c = coeff(L.c[y][j], k);
        if (c == 0) continue;
        Exps b = a;
        b[k] -= 1;
        b[j] += 1;
        v.add(B.at(b), -Q(a[k]) * c);
      }
    }
    return v.take();
  });
}

// φ*p(X) = p(φX), φ : g -> K given as a dim K x dim g matrix
inline Poly pull_back(const Poly& p, const SparseMatrix& phi) {
  int g = phi.cols();
  std::vector<Poly> lin(phi.rows());
  for (int y = 0; y < g; ++y)
    for (auto& [k, q] : phi.col(y)) {
      Exps e(g, 0);
      e[y] = 1;
      lin[k][e] += q;
    }
  Poly out;
  for (auto& [a, x] : p) {
    Poly term{{Exps(g, 0), x}};
    for (size_t k = 0; k < a.size(); ++k)
      for (int t = 0; t < a[k]; ++t) term = poly_mul(term, lin[k]);
    for (auto& [b, y] : term) out[b] += y;
  }
  std::erase_if(out, [](const auto& e) { return e.second == 0; });
  return out;
}

// transgression T(P)(X_1..X_{2m-1}) = Σ_σ sgn σ P̃(X_σ1, [X_σ2, X_σ3], …), as a form Σ T_I e^I
inline std::map<Mask, Q> transgression_form(const LieAlgebra& L, const Poly& P, int m) {
  int n = L.dim();
  Z mf = factorial(m);
  auto polar = [&](const std::vector<SparseVec>& vs) {
    // P̃(e_{k_1},…,e_{k_m}) = p_α α!/m!
    Q total = 0;
    std::function<void(size_t, Exps&, Q)> rec = [&](size_t t, Exps& a, Q w) {
      if (t == vs.size()) {
        auto it = P.find(a);
        if (it != P.end()) total += w * it->second * Q(multi_factorial(a)) / Q(mf);
        return;
      }
      for (auto& [k, q] : vs[t]) {
        ++a[k];
        rec(t + 1, a, w * q);
        --a[k];
      }
    };
    Exps a(n, 0);
    rec(0, a, Q(1));
    return total;
  };
  std::map<Mask, Q> out;
  for (Mask I = 0; I < (Mask(1) << n); ++I) {
    if (popcount(I) != 2 * m - 1) continue;
    std::vector<int> xs = mask_bits(I), perm(xs.size());
    std::iota(perm.begin(), perm.end(), 0);
    Q val = 0;
    do {
      int inv = 0;
      for (size_t i = 0; i < perm.size(); ++i)
        for (size_t j = i + 1; j < perm.size(); ++j) inv += perm[i] > perm[j];
      std::vector<SparseVec> vs{SparseVec{{xs[perm[0]], Q(1)}}};
      for (size_t t = 1; t + 1 < perm.size(); t += 2) vs.push_back(L.c[xs[perm[t]]][xs[perm[t + 1]]]);
      val += sgn(inv) * polar(vs);
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (val != 0) out[I] = val;
  }
  return out;
}

inline std::vector<SparseVec> degree_block_kernel(const std::vector<SparseMatrix>& ops, const GradedVectorSpace& V, int deg) {
  auto [a, b] = V.range(deg);
  std::vector<SparseMatrix> blocks;
  for (auto& f : ops) blocks.push_back(f.block(a, b, a, b));
  Subspace k = blocks.empty() ? kernel_basis(SparseMatrix(0, b - a)) : kernel_basis(SparseMatrix::stack(blocks, b - a));
  std::vector<SparseVec> out;
  for (auto& v : k.basis) {
    SparseVec flat;
    for (auto& [i, x] : v) flat.emplace_back(i + a, x);
    out.push_back(std::move(flat));
  }
  return out;
}

}  // namespace detail

// Λ = H_*(g) on primitive generators x_j, S = S[sI(g)] on y_j, τ(y_j) = x_j.
struct SmallCoefficients {
  LieAlgebra L;
  std::vector<Poly> P;                           // free generators of S(g*)^g
  std::vector<int> poly_degree;                  // m_j
  std::vector<std::map<Mask, Q>> transgression;  // T(P_j) as invariant forms
  CCE cce;
  std::vector<SparseVec> x_rep;  // invariant cycles of Λ[sg] dual to T(P_j), orthogonal to decomposables
  ExteriorCoalgebra lambda;      // abstract Λ, generators of degree 2m_j - 1
  SparseMatrix realization;      // Λ -> Λ[sg], wedge of representatives
  bool realization_injective = false;
  bool betti_match = false;

  int generators() const { return (int)P.size(); }
  std::vector<int> y_degrees() const {
    std::vector<int> d;
    for (int m : poly_degree) d.push_back(2 * m);
    return d;
  }
  SymmetricCoalgebra symmetric(int top) const {
    std::vector<std::string> names;
    for (int j = 0; j < generators(); ++j) names.push_back("y" + std::to_string(j + 1));
    return symmetric_coalgebra(y_degrees(), names, top);
  }
  // τ : S -> Λ as a matrix
  SparseMatrix tau(const SymmetricCoalgebra& S) const {
    return matrix_from(lambda.basis.dim(), S.basis.dim(), [&](int c) {
      const Exps& a = S.basis.key(c);
      if (weight(a) != 1) return SparseVec{};
      int j = (int)(std::find(a.begin(), a.end(), 1) - a.begin());
      return SparseVec{{lambda.basis.at(Mask(1) << j), Q(1)}};
    });
  }
  // t_j^β monomials in the generators P_j, as polynomials of degree m
  std::vector<std::pair<Exps, Poly>> generator_monomials(int m) const {
    std::vector<std::pair<Exps, Poly>> out;
    for (auto& b : exponent_vectors(poly_degree, m)) {
      int deg = 0;
      for (int j = 0; j < generators(); ++j) deg += b[j] * poly_degree[j];
      if (deg != m) continue;
      Poly p{{Exps(L.dim(), 0), Q(1)}};
      for (int j = 0; j < generators(); ++j)
        for (int t = 0; t < b[j]; ++t) p = detail::poly_mul(p, P[j]);
      out.emplace_back(b, p);
    }
    return out;
  }
};

inline SmallCoefficients small_coefficients(const LieAlgebra& L) {
  if (!L.compact_presentation) throw input_error(L.name + ": small coefficients need a compact presentation");
  if (!is_reductive(L)) throw input_error(L.name + ": not reductive");
  int n = L.dim();
  SmallCoefficients R;
  R.L = L;
  // invariant polynomials, generators = complement of decomposables degree by degree
  std::map<int, std::vector<Poly>> inv;
  for (int m = 1; 2 * m - 1 <= n; ++m) {
    auto B = detail::poly_basis(n, m);
    std::vector<SparseMatrix> ops;
    for (int y = 0; y < n; ++y) ops.push_back(detail::coadjoint_on_polys(L, y, B));
    Subspace k = kernel_basis(SparseMatrix::stack(ops, B.dim()));
    EchelonBasis dec;
    for (int a = 1; a < m; ++a)
      for (auto& p : inv[a])
        for (auto& q : inv[m - a]) dec.insert(detail::poly_vec(B, detail::poly_mul(p, q)));
    for (auto& v : k.basis) {
      inv[m].push_back(detail::vec_poly(B, v));
      if (dec.insert(v)) {
        R.P.push_back(detail::vec_poly(B, v));
        R.poly_degree.push_back(m);
      }
    }
  }
  int total = 0;
  for (int m : R.poly_degree) total += 2 * m - 1;
  if (total != n) throw std::logic_error(L.name + ": generator degrees do not add up to dim g");

  R.cce = lie_cce(L);
  const auto& CB = R.cce.ext.basis;
  FormModule forms = cochains(L, trivial_module(n));
  auto form_vec = [&](const std::map<Mask, Q>& f) {
    // <e^I, s_J> = δ_IJ: forms are stored on the chain basis
    VecBuilder v;
    for (auto& [I, q] : f) v.add(CB.at(I), q);
    return v.take();
  };
  std::map<int, std::vector<std::map<Mask, Q>>> inv_forms;
  for (int p = 0; p <= n; ++p)
    for (auto& v : detail::degree_block_kernel(forms.calc.lambda, forms.calc.space, -p)) {
      std::map<Mask, Q> f;
      for (auto& [i, q] : v) f[forms.basis.key(i).first] = q;
      inv_forms[p].push_back(f);
    }
  for (int j = 0; j < R.generators(); ++j) R.transgression.push_back(detail::transgression_form(L, R.P[j], R.poly_degree[j]));

  std::vector<int> xdeg;
  for (int m : R.poly_degree) xdeg.push_back(2 * m - 1);
  for (int p : std::set<int>(xdeg.begin(), xdeg.end())) {
    std::vector<std::map<Mask, Q>> dec;
    for (int a = 1; a < p; ++a)
      for (auto& f : inv_forms[a])
        for (auto& g : inv_forms[p - a]) {
          std::map<Mask, Q> w;
          for (auto& [I, x] : f)
            for (auto& [J, y] : g)
              if (int s = wedge_sign(I, J)) w[I | J] += s * x * y;
          dec.push_back(w);
        }
    auto chains = detail::degree_block_kernel(R.cce.calc.lambda, R.cce.calc.space, p);
    std::vector<int> gens;
    for (int j = 0; j < R.generators(); ++j)
      if (xdeg[j] == p) gens.push_back(j);
    // equations: <D, x> = 0 for decomposables, <T(P_i), x> = δ_ij
    int q = (int)chains.size();
    std::vector<SparseVec> rows;
    auto row_of = [&](const std::map<Mask, Q>& f) {
      SparseVec fv = form_vec(f);
      VecBuilder r;
      for (int k = 0; k < q; ++k) {
        Q s = 0;
        for (auto& [i, x] : chains[k]) s += x * coeff(fv, i);
        if (s != 0) r.add(k, s);
      }
      return r.take();
    };
    for (auto& f : dec) rows.push_back(row_of(f));
    for (int i : gens) rows.push_back(row_of(R.transgression[i]));
    SparseMatrix A = SparseMatrix::from_columns(q, rows).transpose();
    if (rank(A) != q) throw std::logic_error(L.name + ": transgression pairing is degenerate in degree " + std::to_string(p));
    for (size_t t = 0; t < gens.size(); ++t) {
      std::vector<Q> rhs(rows.size(), Q(0));
      rhs[dec.size() + t] = 1;
      auto sol = solve(A, rhs);
      if (!sol) throw std::logic_error(L.name + ": no chain dual to a transgressed generator");
      VecBuilder x;
      for (int k = 0; k < q; ++k)
        if ((*sol)[k] != 0) x.add(chains[k], (*sol)[k]);
      if (R.x_rep.size() <= (size_t)gens[t]) R.x_rep.resize(R.generators());
      R.x_rep[gens[t]] = x.take();
    }
  }
  R.x_rep.resize(R.generators());

  std::vector<std::string> xn;
  for (int j = 0; j < R.generators(); ++j) xn.push_back("x" + std::to_string(j + 1));
  R.lambda = exterior_coalgebra(xdeg, xn, n);
  Algebra chainalg = exterior_algebra(R.cce.ext);
  R.realization = matrix_from(CB.dim(), R.lambda.basis.dim(), [&](int c) {
    SparseVec v{{chainalg.unit, Q(1)}};
    for (int j : mask_bits(R.lambda.basis.key(c))) v = chainalg.product(v, R.x_rep[j]);
    return v;
  });
  // injective on homology: independent modulo boundaries, and all cycles
  bool cycles = (R.cce.calc.d * R.realization).is_zero();
  SparseMatrix both = SparseMatrix::stack({R.realization.transpose(), R.cce.calc.d.transpose()}, CB.dim()).transpose();
  R.realization_injective = cycles && rank(both) - rank(R.cce.calc.d) == R.lambda.basis.dim();
  std::vector<int> betti = lie_betti(L);
  R.betti_match = true;
  for (int p = 0; p <= n; ++p)
    if (R.lambda.basis.space.dim(p) != betti[p]) R.betti_match = false;
  return R;
}

// master equation Dτ = τ∪τ for τ : S -> Λ (both differentials vanish)
inline MasterResidual transgression_master_residual(const SmallCoefficients& SC, int upto) {
  SymmetricCoalgebra S = SC.symmetric(upto);
  Algebra A = exterior_algebra(SC.lambda);
  return master_equation_residual(S.coalg, SparseMatrix(S.basis.dim(), S.basis.dim()), A, SC.tau(S), upto);
}

// ---------- modules over Λ and over S* ----------

// Graded module with a differential and one action matrix per generator. For Λ-modules the
// generators x_j act on the right raising degree by |x_j|; for S*-modules y*_j act on the left
// lowering degree by |y_j|. Degrees >= lo are complete; a finite module is complete everywhere.
struct KoszulModule {
  GradedVectorSpace space;
  SparseMatrix d;
  std::vector<SparseMatrix> act;
  int lo = 0, hi = 0;
  bool finite = false;

  int dim() const { return space.dim(); }
  ChainComplex complex() const {
    const int far = 1 << 20;
    return finite ? ChainComplex(space, d, -far, far) : ChainComplex(space, d, lo, hi);
  }
};

struct ModuleReport {
  size_t d_squared = 0, d_linear = 0, relations = 0;  // relations: x_i x_j = -x_j x_i (Λ) or commute (S*)
  bool ok() const { return !d_squared && !d_linear && !relations; }
};

inline ModuleReport check_module(const KoszulModule& M, bool exterior) {
  auto cut = [&](const SparseMatrix& m, int margin) {
    size_t r = 0;
    for (int c = 0; c < m.cols(); ++c)
      if (M.space.degree(c) >= M.lo + margin) r += m.col(c).size();
    return r;
  };
  ModuleReport r;
  r.d_squared = cut(M.d * M.d, 2);
  int shift = 0;
  for (auto& a : M.act)
    for (int c = 0; c < a.cols(); ++c)
      for (auto& [i, q] : a.col(c)) shift = std::max(shift, M.space.degree(c) - M.space.degree(i));
  for (size_t i = 0; i < M.act.size(); ++i) {
    r.d_linear += cut(M.d * M.act[i] - M.act[i] * M.d, shift + 1);
    for (size_t j = i; j < M.act.size(); ++j) {
      SparseMatrix a = M.act[i] * M.act[j], b = M.act[j] * M.act[i];
      r.relations += cut(exterior ? a + b : a - b, 2 * shift);
    }
  }
  return r;
}

// ℚ with zero action
inline KoszulModule ground_module(int generators) {
  KoszulModule M;
  M.space = GradedVectorSpace({0}, {"1"});
  M.d = SparseMatrix(1, 1);
  M.act.assign(generators, SparseMatrix(1, 1));
  M.lo = -1, M.hi = 1;
  M.finite = true;
  return M;
}

// Λ acting on itself by right multiplication
inline KoszulModule lambda_regular_module(const SmallCoefficients& SC) {
  const auto& B = SC.lambda.basis;
  KoszulModule M;
  M.space = B.space;
  M.d = SparseMatrix(B.dim(), B.dim());
  for (int j = 0; j < SC.generators(); ++j)
    M.act.push_back(matrix_from(B.dim(), B.dim(), [&](int c) {
      Mask m = B.key(c);
      int s = wedge_sign(m, Mask(1) << j);
      return s ? SparseVec{{B.at(m | (Mask(1) << j)), Q(s)}} : SparseVec{};
    }));
  M.lo = -1, M.hi = B.space.max_degree() + 1;
  M.finite = true;
  return M;
}

// H*(K) = Λ_K* with (ξ·x)(z) = ξ(xz); ξ_M sits in homological degree -|M|
inline KoszulModule cohomology_module(const SmallCoefficients& SC) {
  const auto& B = SC.lambda.basis;
  std::vector<std::tuple<Mask, int, std::string>> items;
  for (int c = 0; c < B.dim(); ++c) items.emplace_back(B.key(c), -B.space.degree(c), "d(" + B.space.label(c) + ")");
  IndexedBasis<Mask> D = make_basis(std::move(items));
  KoszulModule M;
  M.space = D.space;
  M.d = SparseMatrix(D.dim(), D.dim());
  for (int j = 0; j < SC.generators(); ++j)
    M.act.push_back(matrix_from(D.dim(), D.dim(), [&](int c) {
      Mask m = D.key(c);
      if (!(m >> j & 1)) return SparseVec{};
      Mask rest = m & ~(Mask(1) << j);
      return SparseVec{{D.at(rest), Q(wedge_sign(Mask(1) << j, rest))}};
    }));
  M.lo = D.space.min_degree() - 1, M.hi = 1;
  M.finite = true;
  return M;
}

// V^g with x_j acting through its invariant representative in Λ[sg] ⊂ U[Cg]
struct InvariantCoefficients {
  KoszulModule module;
  Subspace invariants;
  size_t preserve_residual = 0;  // x_j must map V^g into V^g
};

inline InvariantCoefficients invariant_coefficients(const SmallCoefficients& SC, const CalculusModule& V) {
  InvariantCoefficients R;
  R.invariants = invariant_subspace(V, false);
  SparseMatrix inc = R.invariants.inclusion(), crd = R.invariants.coordinates();
  std::vector<int> deg;
  std::vector<std::string> lab;
  for (int k = 0; k < R.invariants.dim(); ++k) {
    deg.push_back(V.space.degree(R.invariants.coord[k]));
    lab.push_back(V.space.label(R.invariants.coord[k]));
  }
  KoszulModule& M = R.module;
  M.space = GradedVectorSpace(deg, lab);
  M.d = crd * V.d * inc;
  const auto& CB = SC.cce.ext.basis;
  for (int j = 0; j < SC.generators(); ++j) {
    SparseMatrix a(V.dim(), V.dim());
    for (auto& [i, q] : SC.x_rep[j]) a = a + q * right_monomial_action(V, CB.key(i));
    SparseMatrix r = crd * a * inc;
    R.preserve_residual += (inc * r - a * inc).nnz();
    M.act.push_back(r);
  }
  M.lo = V.lo, M.hi = V.hi;
  M.finite = V.lo < (V.dim() ? V.space.min_degree() : 0);
  return R;
}

// ---------- Koszul functors ----------

struct KoszulT {
  SymmetricCoalgebra S;
  IndexedBasis<std::pair<int, int>> basis;
  KoszulModule module;  // S*-module Hom^τ(S, N)
};

// t*(N) = Hom^τ(S, N) for a right Λ-module N, complete in cochain degrees <= max_cochain
inline KoszulT koszul_t(const SmallCoefficients& SC, const KoszulModule& N, int max_cochain) {
  KoszulT R;
  int nmax = N.dim() ? N.space.max_degree() : 0;
  int top = nmax + max_cochain + 1;
  R.S = SC.symmetric(top);
  int lo = N.finite ? -max_cochain - 1 : std::max(N.lo, -max_cochain - 1);
  R.basis = hom_basis(R.S.basis.space, N.space, -lo);
  const auto& SB = R.S.basis;
  ActionByCochain right(SB.dim(), SparseMatrix(N.dim(), N.dim()));
  for (int c = 0; c < SB.dim(); ++c)
    if (weight(SB.key(c)) == 1)
      for (int j = 0; j < SC.generators(); ++j)
        if (SB.key(c)[j]) right[c] = N.act[j];
  KoszulModule& M = R.module;
  M.space = R.basis.space;
  M.d = twisted_hom_differential(R.S.coalg, SparseMatrix(SB.dim(), SB.dim()), R.basis, N.space, N.d, right);
  // (y*_j f)(y^α) = α_j f(y^{α-e_j})
  for (int j = 0; j < SC.generators(); ++j)
    M.act.push_back(matrix_from(R.basis.dim(), R.basis.dim(), [&](int x) {
      auto [c, n] = R.basis.key(x);
      Exps a = SB.key(c);
      a[j] += 1;
      int sc = SB.find(a);
      int y = sc >= 0 ? R.basis.find({sc, n}) : -1;
      return y >= 0 ? SparseVec{{y, Q(a[j])}} : SparseVec{};
    }));
  M.lo = lo, M.hi = nmax + 1;
  return R;
}

struct KoszulH {
  IndexedBasis<std::pair<int, int>> basis;
  KoszulModule module;  // Λ-module Hom^τ(Λ, M)
};

// h*(M) = Hom(Λ, M) with δf = d_M f + (-1)^{|f|} Σ_j y*_j (f·x_j) and (f·x)(c) = f(x∧c)
inline KoszulH koszul_h(const SmallCoefficients& SC, const KoszulModule& Mod) {
  KoszulH R;
  const auto& LB = SC.lambda.basis;
  int mmax = Mod.dim() ? Mod.space.max_degree() : 0;
  std::vector<std::tuple<std::pair<int, int>, int, std::string>> items;
  for (int c = 0; c < LB.dim(); ++c)
    for (int m = 0; m < Mod.dim(); ++m) {
      int h = Mod.space.degree(m) - LB.space.degree(c);
      if (Mod.finite || h >= Mod.lo) items.emplace_back(std::pair{c, m}, h, LB.space.label(c) + " -> " + Mod.space.label(m));
    }
  R.basis = make_basis(std::move(items));
  const auto& B = R.basis;
  int N = B.dim();
  KoszulModule& M = R.module;
  M.space = B.space;
  for (int j = 0; j < SC.generators(); ++j)
    M.act.push_back(matrix_from(N, N, [&](int x) {
      auto [c, m] = B.key(x);
      Mask a = LB.key(c);
      if (!(a >> j & 1)) return SparseVec{};
      Mask rest = a & ~(Mask(1) << j);
      int y = B.find({LB.at(rest), m});
      return y >= 0 ? SparseVec{{y, Q(wedge_sign(Mask(1) << j, rest))}} : SparseVec{};
    }));
  M.d = matrix_from(N, N, [&](int x) {
    auto [c, m] = B.key(x);
    VecBuilder v;
    for (auto& [m2, q] : Mod.d.col(m)) {
      int y = B.find({c, m2});
      if (y >= 0) v.add(y, q);
    }
    int s = sgn(B.space.degree(x));
    for (int j = 0; j < SC.generators(); ++j)
      for (auto& [y, q] : M.act[j].col(x)) {
        auto [c2, m2] = B.key(y);
        for (auto& [m3, q2] : Mod.act[j].col(m2)) {
          int z = B.find({c2, m3});
          if (z >= 0) v.add(z, q * q2 * s);
        }
      }
    return v.take();
  });
  M.finite = Mod.finite;
  M.lo = Mod.finite ? (N ? B.space.min_degree() - 1 : -1) : Mod.lo;
  M.hi = mmax + 1;
  return R;
}

// homology dims in homological degrees [a, b]
inline std::vector<int> homology_dims(const ChainComplex& c, int a, int b) {
  std::vector<int> out;
  for (int j = a; j <= b; ++j) out.push_back(c.homology_dimension(j));
  return out;
}

struct KoszulRoundtrip {
  std::string name;
  ModuleReport input, t_module, h_module, th_module;
  size_t d_squared = 0;  // over all four complexes
  int from = 0, to = 0;  // homological window compared
  std::vector<int> n_dims, ht_dims, m_dims, th_dims;
  bool ok() const {
    return input.ok() && t_module.ok() && h_module.ok() && th_module.ok() && !d_squared && n_dims == ht_dims &&
           m_dims == th_dims;
  }
};

// h*(t*(N)) against N, and t*(h*(M)) against M = t*(N), on cochain degrees 0..max_cochain
inline KoszulRoundtrip koszul_roundtrip(const SmallCoefficients& SC, const KoszulModule& N, int max_cochain,
                                        std::string name = "") {
  KoszulRoundtrip R;
  R.name = std::move(name);
  R.input = check_module(N, true);
  KoszulT T = koszul_t(SC, N, max_cochain);
  KoszulH H = koszul_h(SC, T.module);
  KoszulT TH = koszul_t(SC, H.module, max_cochain);
  R.t_module = check_module(T.module, false);
  R.h_module = check_module(H.module, true);
  R.th_module = check_module(TH.module, false);
  for (const KoszulModule* c : std::initializer_list<const KoszulModule*>{&N, &T.module, &H.module, &TH.module}) R.d_squared += c->complex().d_squared_residual();
  int nmax = N.dim() ? N.space.max_degree() : 0;
  R.from = -max_cochain;
  R.to = nmax;
  R.n_dims = homology_dims(N.complex(), R.from, R.to);
  R.ht_dims = homology_dims(H.module.complex(), R.from, R.to);
  R.m_dims = homology_dims(T.module.complex(), R.from, R.to);
  R.th_dims = homology_dims(TH.module.complex(), R.from, R.to);
  return R;
}

// ---------- small Cartan model Hom^τ(S, V^g) ----------

struct SmallCartanModel {
  SmallCoefficients coefficients;
  InvariantCoefficients vg;
  ModuleReport vg_report;
  KoszulT hom;
  ModelResult result;
};

inline SmallCartanModel small_cartan_model(const LieAlgebra& L, const CalculusModule& V, int max_degree) {
  SmallCartanModel M;
  M.coefficients = small_coefficients(L);
  M.vg = invariant_coefficients(M.coefficients, V);
  M.vg_report = check_module(M.vg.module, true);
  M.hom = koszul_t(M.coefficients, M.vg.module, max_degree);
  M.result.model = "small";
  M.result.complex = M.hom.module.complex();
  M.result.trusted_hi = max_degree;
  M.result.dims = cochain_dims(M.result.complex, max_degree);
  return M;
}

// ---------- homogeneous spaces K/G ----------

struct HomogeneousResult {
  int lie_map_residual = 0;
  ModelResult cartan, small;
  std::vector<Q> theta;  // ϑ coefficients (for display): entry per (y^β, x_j) pair, row-major
  bool agree = false;
};

// Cartan model of g acting on Alt(K) through φ, and Hom^ϑ(S_g, H*(K)) with
// ϑ(y^β) = Σ_j β!·[t^β](φ*P_j^K) x_j^K
inline HomogeneousResult homogeneous_space(const LieAlgebra& g, const LieAlgebra& K, const SparseMatrix& phi,
                                           int max_degree) {
  if (phi.rows() != K.dim() || phi.cols() != g.dim()) throw input_error("embedding has the wrong shape");
  HomogeneousResult R;
  R.lie_map_residual = lie_map_residual(g, K, phi);
  if (R.lie_map_residual) throw input_error("embedding is not a Lie algebra map");
  CalculusModule V = restrict_calculus(forms_module(K), phi);
  R.cartan = cartan_model(g, V, max_degree).result;

  SmallCoefficients SK = small_coefficients(K), SG = small_coefficients(g);
  KoszulModule HK = cohomology_module(SK);
  int top = max_degree + 1 + K.dim();
  SymmetricCoalgebra S = SG.symmetric(top);
  // φ*P_j^K in the generators t of S(g*)^g
  std::vector<std::map<Exps, Q>> coeffs(SK.generators());
  for (int j = 0; j < SK.generators(); ++j) {
    int m = SK.poly_degree[j];
    Poly q = detail::pull_back(SK.P[j], phi);
    if (q.empty()) continue;
    auto B = detail::poly_basis(g.dim(), m);
    auto mons = SG.generator_monomials(m);
    std::vector<SparseVec> cols;
    for (auto& [b, p] : mons) cols.push_back(detail::poly_vec(B, p));
    SparseVec target = detail::poly_vec(B, q);
    std::vector<Q> rhs(B.dim(), Q(0));
    for (auto& [i, x] : target) rhs[i] = x;
    auto sol = solve(SparseMatrix::from_columns(B.dim(), cols), rhs);
    if (!sol) throw std::logic_error("restricted invariant is not a polynomial in the generators");
    for (size_t t = 0; t < mons.size(); ++t)
      if ((*sol)[t] != 0) coeffs[j][mons[t].first] = (*sol)[t];
  }
  ActionByCochain right(S.basis.dim(), SparseMatrix(HK.dim(), HK.dim()));
  for (int c = 0; c < S.basis.dim(); ++c)
    for (int j = 0; j < SK.generators(); ++j) {
      auto it = coeffs[j].find(S.basis.key(c));
      Q t = it == coeffs[j].end() ? Q(0) : it->second * Q(multi_factorial(S.basis.key(c)));
      if (t != 0) right[c] = right[c] + t * HK.act[j];
      R.theta.push_back(t);
    }
  int lo = -max_degree - 1;
  auto basis = hom_basis(S.basis.space, HK.space, -lo);
  ChainComplex small(basis.space,
                     twisted_hom_differential(S.coalg, SparseMatrix(S.basis.dim(), S.basis.dim()), basis, HK.space,
                                              HK.d, right),
                     lo, 1);
  R.small.model = "small";
  R.small.complex = small;
  R.small.trusted_hi = max_degree;
  R.small.dims = cochain_dims(small, max_degree);
  R.agree = R.small.dims == R.cartan.dims;
  return R;
}

// ---------- cup action of invariant polynomials ----------

// (P·f)(c) = Σ_{Δc = c'⊗c''} <P, c'> f(c''), with <a^γ, u^α> = δ_{γα} α!
inline SparseMatrix cartan_cup_matrix(const CartanModel& C, const Poly& P) {
  const auto& SB = C.S.S.basis;
  const auto& co = C.S.S.coalg;
  std::vector<std::vector<std::pair<int, Q>>> by_right(SB.dim());  // c'' -> (c, weight)
  for (int c = 0; c < SB.dim(); ++c)
    for (auto& [a, b, q] : co.delta[c]) {
      auto it = P.find(SB.key(a));
      if (it != P.end()) by_right[b].emplace_back(c, q * it->second * Q(multi_factorial(SB.key(a))));
    }
  return matrix_from(C.basis.dim(), C.basis.dim(), [&](int x) {
    auto [c, n] = C.basis.key(x);
    VecBuilder v;
    for (auto& [c2, w] : by_right[c]) {
      int y = C.basis.find({c2, n});
      if (y >= 0) v.add(y, w);
    }
    return v.take();
  });
}

// rank of the map induced on homology by F from degree j to degree j2 of the same complex
inline int induced_rank(const ChainComplex& cx, const SparseMatrix& F, int j, int j2) {
  Homology h = cx.homology(j);
  cx.require(j2);
  auto [a, b] = cx.space.range(j2);
  SparseMatrix bd = cx.block(j2 + 1);
  std::vector<SparseVec> imgs;
  for (auto& r : h.representatives) {
    SparseVec v = F.apply(r), loc;
    for (auto& [i, x] : v) {
      if (i < a || i >= b) throw std::logic_error("induced_rank: image not in the target degree");
      loc.emplace_back(i - a, x);
    }
    imgs.push_back(std::move(loc));
  }
  int rb = rank(bd);
  std::vector<SparseVec> cols(bd.columns());
  cols.insert(cols.end(), imgs.begin(), imgs.end());
  return rank(SparseMatrix::from_columns(b - a, std::move(cols))) - rb;
}

struct CupActionReport {
  int generator = 0, from = 0;  // cochain degree of the source classes
  int cartan_rank = 0, small_rank = 0;
  size_t chain_residual = 0;  // P·δ - δ·P on Cartan invariants
  bool ok() const { return !chain_residual && cartan_rank == small_rank; }
};

// P_j acting on the Cartan model against y*_j acting on the small model, H^k -> H^{k+2m_j}
inline std::vector<CupActionReport> cup_action_check(const LieAlgebra& L, const CalculusModule& V, int max_degree) {
  CartanModel C = cartan_model(L, V, max_degree);
  SmallCartanModel Sm = small_cartan_model(L, V, max_degree);
  const SmallCoefficients& SC = Sm.coefficients;
  std::vector<CupActionReport> out;
  SparseMatrix inc = C.invariants.inclusion(), crd = C.invariants.coordinates();
  for (int j = 0; j < SC.generators(); ++j) {
    SparseMatrix Pm = cartan_cup_matrix(C, SC.P[j]);
    SparseMatrix onInv = crd * Pm * inc;
    int shift = 2 * SC.poly_degree[j];
    for (int k = 0; k + shift <= max_degree; ++k) {
      CupActionReport r;
      r.generator = j;
      r.from = k;
      SparseMatrix res = (C.delta * Pm - Pm * C.delta) * inc;
      for (int c = 0; c < res.cols(); ++c)
        if (-C.hom.space.degree(C.invariants.coord[c]) + shift < max_degree) r.chain_residual += res.col(c).size();
      if (!(inc * onInv == Pm * inc)) ++r.chain_residual;
      r.cartan_rank = induced_rank(C.result.complex, onInv, -k, -k - shift);
      r.small_rank = induced_rank(Sm.result.complex, Sm.hom.module.act[j], -k, -k - shift);
      out.push_back(r);
    }
  }
  return out;
}

}  // namespace dgx
