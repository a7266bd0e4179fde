#pragma once

#include "calculus.hpp"
#include "coalgebra.hpp"

namespace dgx {

struct LieAlgebra {
  std::string name;
  std::vector<std::string> basis;
  Structure c;  // c[i][j] = [e_i, e_j]
  bool compact_presentation = false;

  int dim() const { return (int)basis.size(); }

  SparseVec bracket(const SparseVec& x, const SparseVec& y) const {
    VecBuilder b;
    for (auto& [i, p] : x)
      for (auto& [j, q] : y) b.add(c[i][j], p * q);
    return b.take();
  }

  // matrix of ad_Y in the basis
  SparseMatrix ad(int y) const {
    std::vector<SparseVec> cols(dim());
    for (int k = 0; k < dim(); ++k) cols[k] = c[y][k];
    return SparseMatrix::from_columns(dim(), cols);
  }

  static LieAlgebra from_constants(std::string name, std::vector<std::string> basis,
                                   const std::vector<std::tuple<int, int, int, Q>>& cijk) {
    LieAlgebra L{std::move(name), std::move(basis)};
    int n = L.dim();
    std::vector<std::vector<VecBuilder>> b(n, std::vector<VecBuilder>(n));
    for (auto& [i, j, k, q] : cijk) b[i][j].add(k, q);
    L.c.assign(n, std::vector<SparseVec>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) L.c[i][j] = b[i][j].take();
    return L;
  }

  // bracket[i][j] filled from i<j entries by antisymmetry
  static LieAlgebra from_upper(std::string name, std::vector<std::string> basis,
                               const std::vector<std::tuple<int, int, int, Q>>& upper) {
    std::vector<std::tuple<int, int, int, Q>> all;
    for (auto& [i, j, k, q] : upper) {
      all.emplace_back(i, j, k, q);
      all.emplace_back(j, i, k, -q);
    }
    return from_constants(std::move(name), std::move(basis), all);
  }
};

inline LieAlgebra abelian(int n, std::string name = "") {
  std::vector<std::string> b;
  for (int i = 1; i <= n; ++i) b.push_back("e" + std::to_string(i));
  LieAlgebra L = LieAlgebra::from_constants(name.empty() ? "abelian" + std::to_string(n) : name, b, {});
  L.compact_presentation = true;
  return L;
}

inline LieAlgebra heisenberg3() {
  return LieAlgebra::from_upper("heis3", {"x", "y", "z"}, {{0, 1, 2, Q(1)}});
}

inline LieAlgebra so3() {
  LieAlgebra L = LieAlgebra::from_upper("so3", {"e1", "e2", "e3"}, {{0, 1, 2, Q(1)}, {1, 2, 0, Q(1)}, {2, 0, 1, Q(1)}});
  L.compact_presentation = true;
  return L;
}

inline LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b, std::string name) {
  std::vector<std::string> basis = a.basis;
  basis.insert(basis.end(), b.basis.begin(), b.basis.end());
  std::vector<std::tuple<int, int, int, Q>> cs;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      for (auto& [k, q] : a.c[i][j]) cs.emplace_back(i, j, k, q);
  int o = a.dim();
  for (int i = 0; i < b.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j)
      for (auto& [k, q] : b.c[i][j]) cs.emplace_back(i + o, j + o, k + o, q);
  LieAlgebra L = LieAlgebra::from_constants(std::move(name), basis, cs);
  L.compact_presentation = a.compact_presentation && b.compact_presentation;
  return L;
}

// ---------- structural checks ----------

// number of (i,j) with [e_i,e_j] != -[e_j,e_i]
inline int antisymmetry_residual(const LieAlgebra& L) {
  int bad = 0;
  for (int i = 0; i < L.dim(); ++i)
    for (int j = i; j < L.dim(); ++j)
      if (!axpy(L.c[i][j], Q(1), L.c[j][i]).empty()) ++bad;
  return bad;
}

// number of triples i<j<k violating the Jacobi identity
inline int jacobi_residual(const LieAlgebra& L) {
  int bad = 0, n = L.dim();
  auto e = [](int i) { return SparseVec{{i, Q(1)}}; };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        SparseVec s = L.bracket(e(i), L.c[j][k]);
        s = axpy(s, Q(1), L.bracket(e(j), L.c[k][i]));
        s = axpy(s, Q(1), L.bracket(e(k), L.c[i][j]));
        if (!s.empty()) ++bad;
      }
  return bad;
}

inline SparseMatrix killing_form(const LieAlgebra& L) {
  int n = L.dim();
  std::vector<SparseMatrix> ad;
  for (int i = 0; i < n; ++i) ad.push_back(L.ad(i));
  std::vector<Triplet> ts;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      SparseMatrix p = ad[i] * ad[j];
      Q tr = 0;
      for (int k = 0; k < n; ++k) tr += p.at(k, k);
      if (tr != 0) ts.emplace_back(i, j, tr);
    }
  return SparseMatrix::from_triplets(n, n, ts);
}

inline Subspace center(const LieAlgebra& L) {
  std::vector<SparseMatrix> ads;
  for (int i = 0; i < L.dim(); ++i) ads.push_back(L.ad(i));
  return kernel_basis(SparseMatrix::stack(ads, L.dim()));
}

inline Subspace derived_algebra(const LieAlgebra& L) {
  std::vector<SparseVec> cols;
  for (int i = 0; i < L.dim(); ++i)
    for (int j = i + 1; j < L.dim(); ++j)
      if (!L.c[i][j].empty()) cols.push_back(L.c[i][j]);
  return column_space(SparseMatrix::from_columns(L.dim(), cols));
}

// reductive iff g = z(g) ⊕ [g,g] with [g,g] semisimple (Killing form of g nondegenerate on it)
inline bool is_reductive(const LieAlgebra& L) {
  if (L.dim() == 0) return true;
  Subspace z = center(L), dg = derived_algebra(L);
  if (z.dim() + dg.dim() != L.dim()) return false;
  std::vector<SparseVec> both = z.basis;
  both.insert(both.end(), dg.basis.begin(), dg.basis.end());
  if (rank(SparseMatrix::from_columns(L.dim(), both)) != L.dim()) return false;
  if (dg.dim() == 0) return true;
  SparseMatrix B = dg.inclusion();
  return rank(B.transpose() * killing_form(L) * B) == dg.dim();
}

// structure constants totally antisymmetric in an orthonormal basis: c_ij^k = -c_ik^j
inline bool has_compact_structure_constants(const LieAlgebra& L) {
  for (int i = 0; i < L.dim(); ++i)
    for (int j = 0; j < L.dim(); ++j)
      for (int k = 0; k < L.dim(); ++k)
        if (coeff(L.c[i][j], k) != -coeff(L.c[i][k], j)) return false;
  return true;
}

// ---------- Koszul-dual CCE coalgebra Λ'_∂[sg] ----------

struct CCE {
  ExteriorCoalgebra ext;  // generators s e_i of degree 1
  CalculusModule calc;    // ∂, λ_Y = ad_Y, i_Y(b) = -sY∧b
};

// ad_Y extended as a derivation on exterior monomials in the letters s e_k
inline SparseVec ad_on_monomial(const LieAlgebra& L, int y, Mask m, const IndexedBasis<Mask>& basis) {
  VecBuilder b;
  for (int k : mask_bits(m)) {
    Mask rest = m & ~(Mask(1) << k);
    // m = sign(k, rest) * e_k ∧ rest
    int s0 = wedge_sign(Mask(1) << k, rest);
    for (auto& [l, q] : L.c[y][k]) {
      int s1 = wedge_sign(Mask(1) << l, rest);
      if (!s1) continue;
      int idx = basis.find(rest | (Mask(1) << l));
      if (idx >= 0) b.add(idx, Q(s0 * s1) * q);
    }
  }
  return b.take();
}

// ∂(s x_1 ... s x_k) = Σ_{p<q} (-1)^{p+q+1} s[x_q, x_p] ∧ (rest)
inline SparseVec cce_boundary(const LieAlgebra& L, Mask m, const IndexedBasis<Mask>& basis) {
  std::vector<int> xs = mask_bits(m);
  VecBuilder b;
  int k = (int)xs.size();
  for (int p = 0; p < k; ++p)
    for (int q = p + 1; q < k; ++q) {
      Mask rest = m & ~(Mask(1) << xs[p]) & ~(Mask(1) << xs[q]);
      int s = sgn((p + 1) + (q + 1) + 1);
      for (auto& [l, c] : L.c[xs[q]][xs[p]]) {
        int w = wedge_sign(Mask(1) << l, rest);
        if (!w) continue;
        int idx = basis.find(rest | (Mask(1) << l));
        if (idx >= 0) b.add(idx, Q(s * w) * c);
      }
    }
  return b.take();
}

inline CCE lie_cce(const LieAlgebra& L, int max_degree = -1) {
  int n = L.dim();
  if (max_degree < 0 || max_degree > n) max_degree = n;
  CCE out;
  std::vector<std::string> names;
  for (auto& b : L.basis) names.push_back("s" + b);
  out.ext = exterior_coalgebra(std::vector<int>(n, 1), names, max_degree);
  const auto& B = out.ext.basis;
  int N = B.dim();
  CalculusModule& M = out.calc;
  M.space = B.space;
  M.d = matrix_from(N, N, [&](int c) { return cce_boundary(L, B.key(c), B); });
  for (int y = 0; y < n; ++y) {
    M.lambda.push_back(matrix_from(N, N, [&](int c) { return ad_on_monomial(L, y, B.key(c), B); }));
    M.iota.push_back(matrix_from(N, N, [&](int c) {
      Mask m = B.key(c);
      int s = wedge_sign(Mask(1) << y, m);
      int idx = B.find(m | (Mask(1) << y));
      return (s && idx >= 0) ? SparseVec{{idx, Q(-s)}} : SparseVec{};
    }));
  }
  M.lo = -1;
  M.hi = max_degree == n ? n + 1 : max_degree;
  return out;
}

inline std::vector<int> lie_betti(const LieAlgebra& L) {
  CCE c = lie_cce(L);
  ChainComplex cx = c.calc.complex();
  std::vector<int> out;
  for (int j = 0; j <= L.dim(); ++j) out.push_back(cx.homology_dimension(j));
  return out;
}

// ---------- cochains Alt(g, W) = Λg* ⊗ W with its outer calculus ----------

// forms e^I have homological degree -|I|
struct FormModule {
  IndexedBasis<std::pair<Mask, int>> basis;  // (I, w)
  CalculusModule calc;
};

// d e^k = -Σ_{i<j} c_ij^k e^i e^j as a derivation; θ_Y e^k = -Σ_j c_Yj^k e^j; ι(Y) contraction.
// Basis elements of homological degree < min_degree are dropped.
inline FormModule cochains(const LieAlgebra& L, const CalculusModule& W, int max_form = -1,
                           int min_degree = std::numeric_limits<int>::min()) {
  int n = L.dim();
  if (max_form < 0 || max_form > n) max_form = n;
  std::vector<std::tuple<std::pair<Mask, int>, int, std::string>> items;
  std::vector<std::string> names;
  for (auto& b : L.basis) names.push_back(b + "*");
  for (Mask I = 0; I < (Mask(1) << n); ++I) {
    if (popcount(I) > max_form) continue;
    for (int w = 0; w < W.dim(); ++w)
      if (W.space.degree(w) - popcount(I) >= min_degree)
        items.emplace_back(std::pair{I, w}, W.space.degree(w) - popcount(I),
                         monomial_label(I, names) + " (x) " + W.space.label(w));
  }
  FormModule F;
  F.basis = make_basis(std::move(items));
  const auto& B = F.basis;
  int N = B.dim();
  // derivation on forms from its action on single generators
  auto form_derivation = [&](Mask I, const std::function<std::vector<std::pair<Mask, Q>>(int)>& on_gen) {
    std::vector<std::pair<Mask, Q>> out;
    for (int k : mask_bits(I)) {
      Mask rest = I & ~(Mask(1) << k);
      int s0 = wedge_sign(Mask(1) << k, rest);
      for (auto& [G, q] : on_gen(k)) {
        int s1 = wedge_sign(G, rest);
        if (s1) out.emplace_back(G | rest, Q(s0 * s1) * q);
      }
    }
    return out;
  };
  auto dce_gen = [&](int k) {
    std::vector<std::pair<Mask, Q>> out;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        Q c = coeff(L.c[i][j], k);
        if (c != 0) out.emplace_back((Mask(1) << i) | (Mask(1) << j), -c);
      }
    return out;
  };
  auto theta_gen = [&](int y) {
    return [&, y](int k) {
      std::vector<std::pair<Mask, Q>> out;
      for (int j = 0; j < n; ++j) {
        Q c = coeff(L.c[y][j], k);
        if (c != 0) out.emplace_back(Mask(1) << j, -c);
      }
      return out;
    };
  };
  auto col = [&](auto&& body) { return matrix_from(N, N, body); };
  CalculusModule& M = F.calc;
  M.space = B.space;
  M.d = col([&](int x) {
    auto [I, w] = B.key(x);
    VecBuilder b;
    for (auto& [J, q] : form_derivation(I, dce_gen)) {
      int y = B.find({J, w});
      if (y >= 0) b.add(y, q);
    }
    for (int a = 0; a < n; ++a) {
      int s = wedge_sign(Mask(1) << a, I);
      if (!s) continue;
      for (auto& [w2, q] : W.lambda[a].col(w)) {
        int y = B.find({I | (Mask(1) << a), w2});
        if (y >= 0) b.add(y, Q(s) * q);
      }
    }
    int s = sgn(popcount(I));
    for (auto& [w2, q] : W.d.col(w)) {
      int y = B.find({I, w2});
      if (y >= 0) b.add(y, Q(s) * q);
    }
    return b.take();
  });
  for (int Y = 0; Y < n; ++Y) {
    auto th = theta_gen(Y);
    M.lambda.push_back(col([&](int x) {
      auto [I, w] = B.key(x);
      VecBuilder b;
      for (auto& [J, q] : form_derivation(I, th)) b.add(B.at({J, w}), q);
      for (auto& [w2, q] : W.lambda[Y].col(w)) b.add(B.at({I, w2}), q);
      return b.take();
    }));
    M.iota.push_back(col([&](int x) {
      auto [I, w] = B.key(x);
      if (!(I >> Y & 1)) return SparseVec{};
      Mask rest = I & ~(Mask(1) << Y);
      return SparseVec{{B.at({rest, w}), Q(wedge_sign(Mask(1) << Y, rest))}};
    }));
  }
  int wmin = W.dim() ? W.space.min_degree() : 0, wmax = W.dim() ? W.space.max_degree() : 0;
  M.lo = std::max(max_form == n ? wmin - n - 1 : wmax - max_form, min_degree);
  M.hi = wmax + 1;
  return F;
}

inline CalculusModule trivial_module(int lie_dim) {
  return CalculusModule::finite(GradedVectorSpace({0}, {"1"}), SparseMatrix(1, 1),
                                std::vector<SparseMatrix>(lie_dim, SparseMatrix(1, 1)),
                                std::vector<SparseMatrix>(lie_dim, SparseMatrix(1, 1)));
}

// H^m(g; W) from the cochain complex (cochain degree m = -homological)
inline int lie_cohomology(const LieAlgebra& L, const CalculusModule& W, int m) {
  FormModule F = cochains(L, W);
  return F.calc.complex().homology_dimension(-m);
}

}  // namespace dgx
