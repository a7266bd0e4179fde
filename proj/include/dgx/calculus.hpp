#pragma once

#include "graded.hpp"

namespace dgx {

// Chain complex with left operators λ_Y (degree 0) and i_Y (degree +1) for each basis
// element Y of a Lie algebra. Relations (checked by verify_calculus):
//   [λX,λY] = λ[X,Y],  iX iY + iY iX = 0,  λX iY - iY λX = i[X,Y],  d iY + iY d = λY.
struct CalculusModule {
  GradedVectorSpace space;
  SparseMatrix d;
  std::vector<SparseMatrix> lambda, iota;
  int lo = 0, hi = -1;

  int dim() const { return space.dim(); }
  ChainComplex complex() const { return ChainComplex(space, d, lo, hi); }

  // right actions derived from the left operators
  SparseMatrix right_g(int Y) const { return -lambda[Y]; }
  SparseMatrix right_s(int Y) const {
    SparseMatrix m = iota[Y];
    for (int c = 0; c < m.cols(); ++c) m.set_col(c, scaled(m.col(c), Q(-sgn(space.degree(c)))));
    return m;
  }

  static CalculusModule finite(GradedVectorSpace s, SparseMatrix d, std::vector<SparseMatrix> lam,
                               std::vector<SparseMatrix> io) {
    CalculusModule m{std::move(s), std::move(d), std::move(lam), std::move(io)};
    m.lo = m.space.dim() ? m.space.min_degree() - 1 : 0;
    m.hi = m.space.dim() ? m.space.max_degree() + 1 : 0;
    return m;
  }
};

// structure constants: bracket[i][j] = [e_i, e_j] as a sparse vector
using Structure = std::vector<std::vector<SparseVec>>;

struct RelationResidual {
  std::string relation;
  size_t entries = 0;  // nonzero entries of the residual
  std::string witness;
};

struct CalculusReport {
  std::vector<RelationResidual> rows;
  bool ok() const {
    for (auto& r : rows)
      if (r.entries) return false;
    return true;
  }
};

namespace detail {

// nonzero entries of m in columns of degree j where every degree in [j+a, j+b] is complete
inline size_t residual_in_window(const SparseMatrix& m, const CalculusModule& M, int a, int b) {
  size_t n = 0;
  for (int c = 0; c < m.cols(); ++c) {
    int j = M.space.degree(c);
    if (j + a >= M.lo && j + b <= M.hi) n += m.col(c).size();
  }
  return n;
}

inline SparseMatrix combo(const std::vector<SparseMatrix>& ops, const SparseVec& v, int n) {
  SparseMatrix out(n, n);
  for (auto& [k, c] : v) out = out + ops[k].scaled_by(c);
  return out;
}

}  // namespace detail

inline CalculusReport verify_calculus(const CalculusModule& M, const Structure& br) {
  using detail::combo;
  using detail::residual_in_window;
  int n = M.dim(), g = (int)M.lambda.size();
  CalculusReport rep;
  auto add = [&](const std::string& rel, size_t e, const std::string& w) {
    for (auto& r : rep.rows)
      if (r.relation == rel) {
        if (!r.entries && e) r.witness = w;
        r.entries += e;
        return;
      }
    rep.rows.push_back({rel, e, e ? w : ""});
  };
  add("d^2 = 0", residual_in_window(M.d * M.d, M, -2, 0), "");
  for (int x = 0; x < g; ++x) {
    std::string wx = "Y=" + std::to_string(x);
    add("d lambda = lambda d", residual_in_window(M.d * M.lambda[x] - M.lambda[x] * M.d, M, -1, 0), wx);
    add("d iY + iY d = lambdaY", residual_in_window(M.d * M.iota[x] + M.iota[x] * M.d - M.lambda[x], M, -1, 1), wx);
    for (int y = 0; y < g; ++y) {
      std::string w = "X=" + std::to_string(x) + ",Y=" + std::to_string(y);
      SparseMatrix lb = combo(M.lambda, br[x][y], n), ib = combo(M.iota, br[x][y], n);
      add("[lambdaX,lambdaY] = lambda[X,Y]",
          residual_in_window(M.lambda[x] * M.lambda[y] - M.lambda[y] * M.lambda[x] - lb, M, 0, 0), w);
      add("iX iY + iY iX = 0", residual_in_window(M.iota[x] * M.iota[y] + M.iota[y] * M.iota[x], M, 0, 2), w);
      add("lambdaX iY - iY lambdaX = i[X,Y]",
          residual_in_window(M.lambda[x] * M.iota[y] - M.iota[y] * M.lambda[x] - ib, M, 0, 1), w);
    }
  }
  return rep;
}

// ---------- tensor and Hom of calculus modules ----------

// f⊗1 + (-1)^{|f||a|} 1⊗f on A⊗B, restricted to the pairs present in `basis`
inline SparseMatrix tensor_op(const IndexedBasis<std::pair<int, int>>& basis, const GradedVectorSpace& A,
                              const SparseMatrix* fa, const SparseMatrix* fb, int fdeg) {
  std::vector<Triplet> ts;
  for (int x = 0; x < basis.dim(); ++x) {
    auto [a, b] = basis.key(x);
    if (fa)
      for (auto& [a2, q] : fa->col(a)) {
        int y = basis.find({a2, b});
        if (y >= 0) ts.emplace_back(y, x, q);
      }
    if (fb) {
      int s = sgn(fdeg * A.degree(a));
      for (auto& [b2, q] : fb->col(b)) {
        int y = basis.find({a, b2});
        if (y >= 0) ts.emplace_back(y, x, s * q);
      }
    }
  }
  return SparseMatrix::from_triplets(basis.dim(), basis.dim(), ts);
}

// A⊗B restricted to total degrees in [dmin, dmax]; window supplied by the caller
inline CalculusModule tensor(const CalculusModule& A, const CalculusModule& B, int dmin, int dmax, int lo, int hi,
                             IndexedBasis<std::pair<int, int>>* basis_out = nullptr) {
  std::vector<std::tuple<std::pair<int, int>, int, std::string>> items;
  for (int a = 0; a < A.dim(); ++a)
    for (int b = 0; b < B.dim(); ++b) {
      int d = A.space.degree(a) + B.space.degree(b);
      if (d >= dmin && d <= dmax) items.emplace_back(std::pair{a, b}, d, A.space.label(a) + " (x) " + B.space.label(b));
    }
  auto basis = make_basis(std::move(items));
  CalculusModule M;
  M.space = basis.space;
  M.d = tensor_op(basis, A.space, &A.d, &B.d, -1);
  for (size_t y = 0; y < A.lambda.size(); ++y) {
    M.lambda.push_back(tensor_op(basis, A.space, &A.lambda[y], &B.lambda[y], 0));
    M.iota.push_back(tensor_op(basis, A.space, &A.iota[y], &B.iota[y], 1));
  }
  M.lo = lo, M.hi = hi;
  if (basis_out) *basis_out = std::move(basis);
  return M;
}

// F·f = F_B f - (-1)^{|F||f|} f F_A on Hom(A,B); key (a,b) is the map e_a -> e_b
inline SparseMatrix hom_op(const IndexedBasis<std::pair<int, int>>& basis, const GradedVectorSpace& A,
                           const GradedVectorSpace& B, const SparseMatrix* fa_rows, const SparseMatrix* fb, int fdeg) {
  std::vector<Triplet> ts;
  for (int x = 0; x < basis.dim(); ++x) {
    auto [a, b] = basis.key(x);
    int fdeg_f = B.degree(b) - A.degree(a);
    if (fb)
      for (auto& [b2, q] : fb->col(b)) {
        int y = basis.find({a, b2});
        if (y >= 0) ts.emplace_back(y, x, q);
      }
    if (fa_rows) {
      // (f F_A)(e_a') = F_A[a,a'] e_b
      int s = -sgn(fdeg * fdeg_f);
      for (auto& [a2, q] : fa_rows->col(a)) {
        int y = basis.find({a2, b});
        if (y >= 0) ts.emplace_back(y, x, s * q);
      }
    }
  }
  return SparseMatrix::from_triplets(basis.dim(), basis.dim(), ts);
}

// Hom(A,B) restricted to degrees in [dmin, dmax]
inline CalculusModule hom(const CalculusModule& A, const CalculusModule& B, int dmin, int dmax, int lo, int hi,
                          IndexedBasis<std::pair<int, int>>* basis_out = nullptr) {
  std::vector<std::tuple<std::pair<int, int>, int, std::string>> items;
  for (int a = 0; a < A.dim(); ++a)
    for (int b = 0; b < B.dim(); ++b) {
      int d = B.space.degree(b) - A.space.degree(a);
      if (d >= dmin && d <= dmax) items.emplace_back(std::pair{a, b}, d, A.space.label(a) + " -> " + B.space.label(b));
    }
  auto basis = make_basis(std::move(items));
  CalculusModule M;
  M.space = basis.space;
  SparseMatrix dA = A.d.transpose();
  M.d = hom_op(basis, A.space, B.space, &dA, &B.d, -1);
  for (size_t y = 0; y < A.lambda.size(); ++y) {
    SparseMatrix la = A.lambda[y].transpose(), ia = A.iota[y].transpose();
    M.lambda.push_back(hom_op(basis, A.space, B.space, &la, &B.lambda[y], 0));
    M.iota.push_back(hom_op(basis, A.space, B.space, &ia, &B.iota[y], 1));
  }
  M.lo = lo, M.hi = hi;
  if (basis_out) *basis_out = std::move(basis);
  return M;
}

// ---------- invariants and coinvariants ----------

// Common kernel of the chosen operators; with_iota=false gives g-invariants only.
inline Subspace invariant_subspace(const CalculusModule& M, bool with_iota = true) {
  std::vector<SparseMatrix> ops = M.lambda;
  if (with_iota) ops.insert(ops.end(), M.iota.begin(), M.iota.end());
  if (ops.empty()) return kernel_basis(SparseMatrix(0, M.dim()));
  return kernel_basis(SparseMatrix::stack(ops, M.dim()));
}

inline ChainComplex invariants_complex(const ChainComplex& c, const Subspace& inv) {
  return subcomplex(c, inv);
}

// restrict a whole calculus module to an invariant subspace of its operators
inline CalculusModule restrict_module(const CalculusModule& M, const Subspace& s) {
  SparseMatrix inc = s.inclusion(), crd = s.coordinates();
  auto restrict_op = [&](const SparseMatrix& f) {
    SparseMatrix x = crd * f * inc;
    if (!(inc * x == f * inc)) throw std::logic_error("restrict_module: operator does not preserve the subspace");
    return x;
  };
  CalculusModule R;
  std::vector<int> deg;
  std::vector<std::string> lab;
  for (int k = 0; k < s.dim(); ++k) {
    deg.push_back(M.space.degree(s.coord[k]));
    lab.push_back(M.space.label(s.coord[k]));
  }
  R.space = GradedVectorSpace(deg, lab);
  R.d = restrict_op(M.d);
  for (auto& f : M.lambda) R.lambda.push_back(restrict_op(f));
  for (auto& f : M.iota) R.iota.push_back(restrict_op(f));
  R.lo = M.lo, R.hi = M.hi;
  return R;
}

// span of the images of all λ_Y and i_Y
inline SparseMatrix coinvariant_relations(const CalculusModule& M) {
  std::vector<SparseVec> cols;
  for (auto* ops : {&M.lambda, &M.iota})
    for (auto& f : *ops)
      for (int c = 0; c < f.cols(); ++c)
        if (!f.col(c).empty()) cols.push_back(f.col(c));
  return SparseMatrix::from_columns(M.dim(), std::move(cols));
}

// evaluate a linear map given by per-basis images
template <class F>
SparseMatrix matrix_from(int rows, int cols, F&& image_of) {
  std::vector<SparseVec> out(cols);
  for (int c = 0; c < cols; ++c) out[c] = image_of(c);
  return SparseMatrix::from_columns(rows, std::move(out));
}

}  // namespace dgx
