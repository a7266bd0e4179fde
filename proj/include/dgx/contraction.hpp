#pragma once

#include "hpt.hpp"
#include "weil.hpp"

namespace dgx {

namespace detail {

inline void add_block(std::vector<Triplet>& ts, const SparseMatrix& b, int r0, int c0) {
  for (auto& [r, c, q] : b.triplets()) ts.emplace_back(r + r0, c + c0, q);
}

inline SparseMatrix diagonal(const std::vector<Q>& v) {
  std::vector<Triplet> ts;
  for (int i = 0; i < (int)v.size(); ++i) ts.emplace_back(i, i, v[i]);
  return SparseMatrix::from_triplets((int)v.size(), (int)v.size(), ts);
}

}  // namespace detail

// Hodge decomposition of (V, ∂) for the inner product with diagonal Gram matrix `gram`:
// harmonic space H = ker Δ, h = -∂* G with G the Green operator, built in degrees < top
// (degree `top` is incomplete for ∂* and is left out of the target).
inline Contraction hodge_contraction(const GradedVectorSpace& V, const SparseMatrix& del, const std::vector<Q>& gram,
                                     int top) {
  int n = V.dim();
  std::vector<Q> ginv;
  for (auto& g : gram) ginv.push_back(1 / g);
  SparseMatrix G = detail::diagonal(gram), delstar = detail::diagonal(ginv) * del.transpose() * G;
  SparseMatrix lap = del * delstar + delstar * del;
  std::vector<Triplet> nts, pts, hts;
  std::vector<int> ndeg;
  std::vector<std::string> nlab;
  for (int j : V.degrees()) {
    if (j >= top) continue;
    auto [a, b] = V.range(j);
    auto [a1, b1] = V.range(j + 1);
    SparseMatrix A = lap.block(a, b, a, b), Gj = G.block(a, b, a, b);
    Subspace ker = kernel_basis(A);
    SparseMatrix K = ker.inclusion();
    SparseMatrix P(b - a, b - a), piK(ker.dim(), b - a);
    if (ker.dim()) {
      piK = invert(K.transpose() * Gj * K) * K.transpose() * Gj;
      P = K * piK;
    }
    SparseMatrix green = invert(A + P) - P;
    SparseMatrix hj = -(delstar.block(a1, b1, a, b) * green);
    int off = (int)ndeg.size();
    detail::add_block(nts, K, a, off);
    detail::add_block(pts, piK, off, a);
    detail::add_block(hts, hj, a1, a);
    for (int k = 0; k < ker.dim(); ++k) {
      ndeg.push_back(j);
      nlab.push_back("harm" + std::to_string(j) + "_" + std::to_string(k));
    }
  }
  Contraction C;
  C.M = V;
  C.N = GradedVectorSpace(ndeg, nlab);
  int m = (int)ndeg.size();
  C.dM = del;
  C.dN = SparseMatrix(m, m);
  C.nabla = SparseMatrix::from_triplets(n, m, nts);
  C.pi = SparseMatrix::from_triplets(m, n, pts);
  C.h = SparseMatrix::from_triplets(n, n, hts);
  return C;
}

// Contraction of a finite complex onto a chosen homology basis: V_j = B_j ⊕ H_j ⊕ C_j with
// C_j completing Z_j by unit vectors (pivot order), B_j = d(C_{j+1}), h(d c) = -c.
inline Contraction splitting_contraction(const GradedVectorSpace& V, const SparseMatrix& d) {
  int n = V.dim();
  std::map<int, std::vector<SparseVec>> Cs, Bs;
  for (int j : V.degrees()) {
    auto [a, b] = V.range(j);
    auto [a0, b0] = V.range(j - 1);
    Subspace z = kernel_basis(d.block(a0, b0, a, b));
    EchelonBasis e;
    for (auto& v : z.basis) e.insert(v);
    for (int i = 0; i < b - a; ++i) {
      SparseVec u{{i, Q(1)}};
      if (e.insert(u)) Cs[j].push_back(u);
    }
  }
  for (int j : V.degrees()) {
    auto [a, b] = V.range(j);
    auto [a1, b1] = V.range(j + 1);
    SparseMatrix dj = d.block(a, b, a1, b1);
    for (auto& c : Cs[j + 1]) Bs[j].push_back(dj.apply(c));
  }
  std::vector<Triplet> nts, pts, hts;
  std::vector<int> ndeg;
  std::vector<std::string> nlab;
  for (int j : V.degrees()) {
    auto [a, b] = V.range(j);
    auto [a0, b0] = V.range(j - 1);
    auto [a1, b1] = V.range(j + 1);
    Subspace z = kernel_basis(d.block(a0, b0, a, b));
    EchelonBasis e;
    for (auto& v : Bs[j]) e.insert(v);
    std::vector<SparseVec> H;
    for (auto& v : z.basis)
      if (e.insert(v)) H.push_back(v);
    std::vector<SparseVec> cols = Bs[j];
    cols.insert(cols.end(), H.begin(), H.end());
    cols.insert(cols.end(), Cs[j].begin(), Cs[j].end());
    SparseMatrix Tinv = invert(SparseMatrix::from_columns(b - a, cols));
    int nb = (int)Bs[j].size(), nh = (int)H.size(), off = (int)ndeg.size();
    for (int k = 0; k < nh; ++k) {
      for (auto& [i, q] : H[k]) nts.emplace_back(a + i, off + k, q);
      ndeg.push_back(j);
      nlab.push_back("H" + std::to_string(j) + "_" + std::to_string(k));
    }
    for (int x = 0; x < b - a; ++x)
      for (auto& [row, q] : Tinv.col(x)) {
        if (row >= nb && row < nb + nh) pts.emplace_back(off + row - nb, a + x, q);
        if (row < nb)
          for (auto& [i, c] : Cs[j + 1][row]) hts.emplace_back(a1 + i, a + x, -q * c);
      }
  }
  Contraction C;
  C.M = V;
  C.N = GradedVectorSpace(ndeg, nlab);
  int m = (int)ndeg.size();
  C.dM = d;
  C.dN = SparseMatrix(m, m);
  C.nabla = SparseMatrix::from_triplets(n, m, nts);
  C.pi = SparseMatrix::from_triplets(m, n, pts);
  C.h = SparseMatrix::from_triplets(n, n, hts);
  return C;
}

// g-equivariant contraction of the Weil coalgebra onto the ground field
struct EquivariantContractionResult {
  WeilCoalgebra W;
  Contraction hodge;      // (W', ∂) onto ∂-harmonic elements
  Contraction perturbed;  // (W', d + ∂) onto (harmonic, d')
  Contraction result;     // (W', d + ∂) onto H
  int trusted_hi = 0;
  ContractionReport report;
  size_t equivariance = 0;        // Σ_Y entries of λ_Y h - h λ_Y
  size_t harmonic_invariant = 0;  // entries of λ_Y ∇ on the harmonic space
  size_t opposite_sign = 0;       // D(-h) + (-h)D - (1 - ∇π)
  std::vector<int> target_dims;   // dims of H in degrees 0..trusted_hi
  bool ok() const {
    if (!report.ok() || equivariance || harmonic_invariant || opposite_sign) return false;
    for (size_t j = 0; j < target_dims.size(); ++j)
      if (target_dims[j] != (j == 0 ? 1 : 0)) return false;
    return true;
  }
};

inline EquivariantContractionResult equivariant_contraction(const LieAlgebra& L, int max_degree) {
  if (!L.compact_presentation) throw input_error(L.name + ": equivariant contraction needs a compact presentation");
  if (!has_compact_structure_constants(L) || !is_reductive(L))
    throw input_error(L.name + ": compact presentation flag set but ad is not skew in the given basis");
  EquivariantContractionResult R;
  int top = max_degree + 2;
  R.trusted_hi = max_degree;
  R.W = weil_coalgebra(L, top);
  const auto& W = R.W;
  std::vector<Q> gram;
  int max_weight = 0;
  for (int i = 0; i < W.basis.dim(); ++i) {
    gram.push_back(Q(multi_factorial(W.basis.key(i).first)));
    max_weight = std::max(max_weight, W.weight(i));
  }
  R.hodge = normalize(hodge_contraction(W.basis.space, W.partial, gram, top));
  R.perturbed = perturb(R.hodge, W.d_koszul, max_weight + 2);
  Contraction split = splitting_contraction(R.perturbed.N, R.perturbed.dN);
  R.result = normalize(compose(R.perturbed, split));
  const Contraction& C = R.result;
  R.report = check_contraction(C, max_degree);
  for (int y = 0; y < L.dim(); ++y) {
    const SparseMatrix& lam = W.calc.lambda[y];
    R.equivariance += detail::entries_upto(lam * C.h - C.h * lam, C.M, max_degree);
    R.harmonic_invariant += detail::entries_upto(lam * R.hodge.nabla, R.hodge.N, max_degree);
  }
  SparseMatrix one = SparseMatrix::identity(C.M.dim());
  R.opposite_sign = detail::entries_upto(C.dM * (-C.h) + (-C.h) * C.dM - (one - C.nabla * C.pi), C.M, max_degree);
  for (int j = 0; j <= max_degree; ++j) R.target_dims.push_back(C.N.dim(j));
  return R;
}

}  // namespace dgx
