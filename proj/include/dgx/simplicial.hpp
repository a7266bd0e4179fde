#pragma once

#include "bar.hpp"

namespace dgx {

// Level n of the simplicial Weil coalgebra: Λ'_∂[s(Eg)_n] with (Eg)_n = g^{n+1}.
// ψ(x^{(j)}) = (x,…,x,0,…,0) (x in slots 0..j) identifies the product Lie algebra with the
// iterated semidirect product whose generic CCE boundary is compared against the bar constituent.
struct SimplicialLevelReport {
  int level = 0, max_total = 0;
  bool dims_equal = false;
  size_t partial_residual = 0;     // generic CCE of ψ-transported g^{n+1} vs iterated twisted ∂
  size_t normalized_residual = 0;  // same after normalization, against relative_bar's ∂
  size_t face_chain_residual = 0;  // faces commute with ∂
  size_t face_sum_residual = 0;    // Σ(-1)^i d_i vs the bar part d_bar - τ^B̄∩
  bool ok() const {
    return dims_equal && !partial_residual && !normalized_residual && !face_chain_residual && !face_sum_residual;
  }
};

namespace detail {

inline SparseMatrix psi_matrix(int dim, int n) {
  std::vector<Triplet> ts;
  for (int j = 0; j <= n; ++j)
    for (int a = 0; a < dim; ++a)
      for (int slot = 0; slot <= j; ++slot) ts.emplace_back(slot * dim + a, j * dim + a, Q(1));
  return SparseMatrix::from_triplets((n + 1) * dim, (n + 1) * dim, ts);
}

// homogeneous face: delete slot i of g^{n+1}
inline SparseMatrix delete_slot(int dim, int n, int i) {
  std::vector<Triplet> ts;
  for (int slot = 0, t = 0; slot <= n; ++slot) {
    if (slot == i) continue;
    for (int a = 0; a < dim; ++a) ts.emplace_back(t * dim + a, slot * dim + a, Q(1));
    ++t;
  }
  return SparseMatrix::from_triplets(n * dim, (n + 1) * dim, ts);
}

// the Lie map F on generators extended multiplicatively to exterior monomials
inline SparseMatrix exterior_power_map(const SparseMatrix& F, const IndexedBasis<Mask>& src,
                                       const IndexedBasis<Mask>& dst) {
  return matrix_from(dst.dim(), src.dim(), [&](int x) {
    std::vector<std::pair<Mask, Q>> acc{{0, Q(1)}};
    for (int l : mask_bits(src.key(x))) {
      std::vector<std::pair<Mask, Q>> next;
      for (auto& [m, q] : acc)
        for (auto& [k, c] : F.col(l)) {
          int s = wedge_sign(m, Mask(1) << k);
          if (s) next.emplace_back(m | (Mask(1) << k), q * c * s);
        }
      acc = std::move(next);
    }
    VecBuilder v;
    for (auto& [m, q] : acc) v.add(dst.at(m), q);
    return v.take();
  });
}

inline std::vector<Mask> split_factors(Mask G, int dim, int copies) {
  std::vector<Mask> f(copies);
  for (int j = 0; j < copies; ++j) f[j] = (G >> (j * dim)) & ((Mask(1) << dim) - 1);
  return f;
}

inline Mask join_factors(const std::vector<Mask>& f, int dim) {
  Mask G = 0;
  for (size_t j = 0; j < f.size(); ++j) G |= f[j] << (j * dim);
  return G;
}

}  // namespace detail

inline LieAlgebra semidirect_from_product(const LieAlgebra& L, int n) {
  LieAlgebra prod = L;
  for (int k = 0; k < n; ++k) prod = direct_sum(prod, L, "");
  int N = prod.dim();
  SparseMatrix psi = detail::psi_matrix(L.dim(), n), psi_inv = invert(psi);
  std::vector<std::tuple<int, int, int, Q>> cs;
  for (int p = 0; p < N; ++p)
    for (int q = 0; q < N; ++q)
      for (auto& [k, c] : psi_inv.apply(prod.bracket(psi.col(p), psi.col(q)))) cs.emplace_back(p, q, k, c);
  std::vector<std::string> names;
  for (int j = 0; j <= n; ++j)
    for (auto& b : L.basis) names.push_back(b + "^" + std::to_string(j));
  return LieAlgebra::from_constants(L.name + "^right_" + std::to_string(n), names, cs);
}

inline SimplicialLevelReport simplicial_weil_check(const LieAlgebra& L, int n, int max_total) {
  int dim = L.dim();
  SimplicialLevelReport r;
  r.level = n;
  r.max_total = max_total;
  if ((n + 1) * dim > 63) throw input_error("simplicial level too large for mask encoding");
  ExteriorCoalgebra ext = exterior_coalgebra(std::vector<int>(dim, 1), L.basis, dim);

  LieAlgebra Ln = semidirect_from_product(L, n);
  CCE generic = lie_cce(Ln, max_total);
  const auto& B = generic.ext.basis;

  // bar constituent Λ'[sg]^{⊗(n+1)} with the iterated twisted ∂, dims per degree
  std::map<int, Z> tensor_dims;
  for (Mask G = 0; G < (Mask(1) << ((n + 1) * dim)); ++G)
    if (popcount(G) <= max_total) tensor_dims[popcount(G)] += 1;
  r.dims_equal = true;
  for (auto& [d, c] : tensor_dims)
    if (Z(B.space.dim(d)) != c) r.dims_equal = false;

  auto constituent = [&](int level, const IndexedBasis<Mask>& basis) {
    return matrix_from(basis.dim(), basis.dim(), [&](int x) {
      VecBuilder v;
      for (auto& [f, q] : detail::tensor_boundary(L, detail::split_factors(basis.key(x), dim, level + 1), ext.basis, false))
        v.add(basis.at(detail::join_factors(f, dim)), q);
      return v.take();
    });
  };
  SparseMatrix twisted = constituent(n, B);
  r.partial_residual = (twisted - generic.calc.d).nnz();

  // normalized comparison against relative_bar on words of length n
  RelativeBar R = relative_bar(L, max_total + n);
  auto to_bar = [&](Mask G, int level) -> int {
    auto f = detail::split_factors(G, dim, level + 1);
    Mask b = f.back();
    f.pop_back();
    for (Mask a : f)
      if (!a) return -1;
    int deg = popcount(G) + level;
    return deg <= R.max_degree ? R.basis.find({f, b}) : -1;
  };
  for (int x = 0; x < B.dim(); ++x) {
    int bx = to_bar(B.key(x), n);
    if (bx < 0) continue;
    int s_in = detail::suspension_sign(R.basis.key(bx).first) * sgn(n);
    VecBuilder expect;
    for (auto& [y, q] : generic.calc.d.col(x)) {
      int by = to_bar(B.key(y), n);
      if (by >= 0) expect.add(by, q * (s_in * detail::suspension_sign(R.basis.key(by).first)));
    }
    SparseVec got = R.partial.col(bx), want = expect.take();
    if (got != want) ++r.normalized_residual;
  }

  if (n == 0) return r;
  // faces: d_i = ψ_{n-1}^{-1} ∘ (delete slot i) ∘ ψ_n
  CCE lower = lie_cce(semidirect_from_product(L, n - 1), max_total);
  SparseMatrix psi_lo_inv = invert(detail::psi_matrix(dim, n - 1)), psi_n = detail::psi_matrix(dim, n);
  SparseMatrix twisted_lo = constituent(n - 1, lower.ext.basis);
  std::vector<SparseMatrix> faces;
  for (int i = 0; i <= n; ++i) {
    SparseMatrix F = psi_lo_inv * detail::delete_slot(dim, n, i) * psi_n;
    faces.push_back(detail::exterior_power_map(F, B, lower.ext.basis));
    r.face_chain_residual += (twisted_lo * faces.back() - faces.back() * twisted).nnz();
  }
  // (d_bar - τ^B̄∩) = s Σ_i (-1)^i d_i s^{-1} on normalized words
  SparseMatrix bar_part = R.d_bar + R.cap;
  for (int x = 0; x < B.dim(); ++x) {
    int bx = to_bar(B.key(x), n);
    if (bx < 0) continue;
    int s_in = detail::suspension_sign(R.basis.key(bx).first);
    VecBuilder expect;
    for (int i = 0; i <= n; ++i)
      for (auto& [y, q] : faces[i].col(x)) {
        int by = to_bar(lower.ext.basis.key(y), n - 1);
        if (by >= 0) expect.add(by, q * (sgn(i) * s_in * detail::suspension_sign(R.basis.key(by).first)));
      }
    if (bar_part.col(bx) != expect.take()) ++r.face_sum_residual;
  }
  return r;
}

}  // namespace dgx
