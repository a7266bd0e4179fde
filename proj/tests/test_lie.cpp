#include <dgx/bar.hpp>
#include <dgx/models.hpp>

#include <gtest/gtest.h>

using namespace dgx;

namespace {

LieAlgebra not_lie() {
  return LieAlgebra::from_upper("not_lie", {"e1", "e2", "e3"}, {{0, 1, 0, Q(1)}, {0, 2, 1, Q(1)}});
}

// Alt^k(g) -> Alt^{k+1}(g) straight from (dω)(x0..xk) = Σ_{i<j} (-1)^{i+j} ω([xi,xj], x0..^i..^j..xk),
// written on subsets of the basis; an oracle independent of the coalgebra machinery
std::vector<int> brute_betti(const LieAlgebra& L) {
  int n = L.dim();
  auto index = [&](Mask m) {
    // position of m among subsets of the same size, in increasing order of mask
    int k = popcount(m), pos = 0;
    for (Mask x = 0; x < m; ++x)
      if (popcount(x) == k) ++pos;
    return pos;
  };
  auto count = [&](int k) {
    int c = 0;
    for (Mask x = 0; x < (Mask(1) << n); ++x) c += popcount(x) == k;
    return c;
  };
  std::vector<int> ranks(n + 2, 0);
  for (int k = 0; k < n; ++k) {
    std::vector<Triplet> ts;
    for (Mask out = 0; out < (Mask(1) << n); ++out) {
      if (popcount(out) != k + 1) continue;
      std::vector<int> xs = mask_bits(out);
      for (int i = 0; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j)
          for (auto& [l, q] : L.c[xs[i]][xs[j]]) {
            // ω(e_l, rest) with rest = xs minus i, j; move e_l into sorted position
            Mask rest = out & ~(Mask(1) << xs[i]) & ~(Mask(1) << xs[j]);
            if (rest & (Mask(1) << l)) continue;
            int before = popcount(rest & ((Mask(1) << l) - 1));
            Mask in = rest | (Mask(1) << l);
            ts.emplace_back(index(out), index(in), q * sgn(i + j + before));
          }
    }
    ranks[k] = rank(SparseMatrix::from_triplets(count(k + 1), count(k), ts));
  }
  std::vector<int> b;
  for (int k = 0; k <= n; ++k) b.push_back(count(k) - ranks[k] - (k ? ranks[k - 1] : 0));
  return b;
}

int calculus_failures(const CalculusReport& r) {
  int f = 0;
  for (auto& x : r.rows) f += x.entries != 0;
  return f;
}

}  // namespace

TEST(Jacobi, Examples) {
  EXPECT_EQ(jacobi_residual(so3()), 0);
  EXPECT_EQ(jacobi_residual(abelian(4)), 0);
  EXPECT_EQ(jacobi_residual(heisenberg3()), 0);
  LieAlgebra bad = not_lie();
  EXPECT_GT(jacobi_residual(bad), 0);
  // the cyclic sum on (e1,e2,e3) is -e2
  SparseVec e1{{0, Q(1)}}, e2{{1, Q(1)}}, e3{{2, Q(1)}};
  VecBuilder cyc;
  cyc.add(bad.bracket(e1, bad.bracket(e2, e3)), Q(1));
  cyc.add(bad.bracket(e2, bad.bracket(e3, e1)), Q(1));
  cyc.add(bad.bracket(e3, bad.bracket(e1, e2)), Q(1));
  EXPECT_EQ(cyc.take(), (SparseVec{{1, Q(-1)}}));
  EXPECT_EQ(antisymmetry_residual(bad), 0);
}

TEST(Reductive, Flags) {
  EXPECT_TRUE(is_reductive(so3()));
  EXPECT_TRUE(is_reductive(abelian(2)));
  EXPECT_FALSE(is_reductive(heisenberg3()));
  EXPECT_TRUE(has_compact_structure_constants(so3()));
  EXPECT_TRUE(is_reductive(direct_sum(so3(), abelian(1), "so3+so2")));
}

TEST(CCE, BoundaryOnSo3) {
  LieAlgebra L = so3();
  CCE c = lie_cce(L);
  int x12 = c.ext.basis.at(0b011), x3 = c.ext.basis.at(0b100);
  EXPECT_EQ(c.calc.d.col(x12), (SparseVec{{x3, Q(-1)}}));
  EXPECT_EQ((c.calc.d * c.calc.d).nnz(), 0u);
}

TEST(CCE, AbelianBoundaryVanishesAndHeisenbergSquaresToZero) {
  EXPECT_TRUE(lie_cce(abelian(3)).calc.d.is_zero());
  CCE h = lie_cce(heisenberg3());
  EXPECT_FALSE(h.calc.d.is_zero());
  EXPECT_TRUE((h.calc.d * h.calc.d).is_zero());
}

TEST(CCE, CoderivationAndCalculus) {
  for (auto L : {so3(), heisenberg3(), abelian(2), direct_sum(so3(), abelian(1), "so3+so2")}) {
    CCE c = lie_cce(L);
    EXPECT_EQ(coderivation_residual(c.ext.coalg, c.calc.d, -1, L.dim()), 0) << L.name;
    EXPECT_EQ(calculus_failures(verify_calculus(c.calc, L.c)), 0) << L.name;
    EXPECT_EQ(coassociativity_residual(c.ext.coalg), 0);
  }
}

TEST(TwistingCochain, MasterEquation) {
  for (auto L : {so3(), heisenberg3(), abelian(2)}) {
    CCE c = lie_cce(L);
    TruncatedUCg U = truncated_ucg(L);
    SparseMatrix t = lie_twisting_cochain(c, U);
    EXPECT_EQ(master_equation_residual(c.ext.coalg, c.calc.d, U.alg, t, L.dim()).entries, 0u) << L.name;
    EXPECT_EQ(maurer_cartan_residual(c.ext.coalg, c.calc.d, U.alg, t, L.dim()).entries, 0u) << L.name;
  }
}

TEST(Cochains, TrivialCoefficients) {
  LieAlgebra L = so3();
  FormModule F = cochains(L, trivial_module(3));
  ChainComplex cx = F.calc.complex();
  const int dims[] = {1, 3, 3, 1};
  for (int k = 0; k <= 3; ++k) EXPECT_EQ(cx.space.dim(-k), dims[k]);
  EXPECT_TRUE(cochains(abelian(3), trivial_module(3)).calc.d.is_zero());
  EXPECT_EQ(cx.d_squared_residual(), 0u);
}

TEST(Cochains, AdjointHasNoInvariants) {
  LieAlgebra L = so3();
  std::vector<SparseMatrix> ad, zero;
  for (int y = 0; y < 3; ++y) {
    ad.push_back(L.ad(y));
    zero.push_back(SparseMatrix(3, 3));
  }
  CalculusModule adj = CalculusModule::finite(GradedVectorSpace({0, 0, 0}, L.basis), SparseMatrix(3, 3), ad, zero);
  EXPECT_EQ(lie_cohomology(L, adj, 0), 0);
  // Whitehead: all cohomology with nontrivial irreducible coefficients vanishes
  for (int k = 1; k <= 3; ++k) EXPECT_EQ(lie_cohomology(L, adj, k), 0);
}

TEST(Betti, FrozenValuesMatchBruteForce) {
  struct Case {
    LieAlgebra L;
    std::vector<int> betti;
  };
  for (auto& [L, b] : std::vector<Case>{{abelian(2), {1, 2, 1}},
                                      {heisenberg3(), {1, 2, 2, 1}},
                                      {so3(), {1, 0, 0, 1}},
                                      {direct_sum(so3(), abelian(1), "so3+so2"), {1, 1, 0, 1, 1}}}) {
    EXPECT_EQ(lie_betti(L), b) << L.name;
    EXPECT_EQ(brute_betti(L), b) << L.name;
    for (int k = 0; k <= L.dim(); ++k) EXPECT_EQ(lie_cohomology(L, trivial_module(L.dim()), k), b[k]);
  }
}

TEST(Betti, PoincareDualityUnimodular) {
  for (auto L : {abelian(3), so3(), heisenberg3()}) {
    auto b = lie_betti(L);
    int n = L.dim();
    for (int k = 0; k <= n; ++k) EXPECT_EQ(b[k], b[n - k]) << L.name;
  }
}

TEST(Invariants, CasimirAndVolume) {
  LieAlgebra L = so3();
  SymmetricModule S = symmetric_module(L, 4);
  Subspace inv = invariant_subspace(S.calc, false);
  int in4 = 0;
  for (auto& v : inv.basis) in4 += S.calc.space.degree(v.front().first) == 4;
  EXPECT_EQ(S.calc.space.dim(4), 6);
  EXPECT_EQ(in4, 1);
  CCE c = lie_cce(L);
  Subspace inv3 = invariant_subspace(c.calc, false);
  int in3 = 0;
  for (auto& v : inv3.basis) in3 += c.calc.space.degree(v.front().first) == 3;
  EXPECT_EQ(in3, 1);
  EXPECT_EQ(invariant_subspace(trivial_module(3), false).dim(), 1);
}

TEST(Calculus, CorruptedContractionIsFlagged) {
  LieAlgebra L = so3();
  CCE c = lie_cce(L);
  CalculusModule bad = c.calc;
  int col = 0;
  while (bad.iota[0].col(col).empty()) ++col;
  bad.iota[0].set_col(col, scaled(bad.iota[0].col(col), Q(2)));
  CalculusReport r = verify_calculus(bad, L.c);
  std::set<std::string> failing;
  for (auto& x : r.rows)
    if (x.entries) failing.insert(x.relation);
  EXPECT_TRUE(failing.count("iX iY + iY iX = 0"));
  EXPECT_TRUE(failing.count("lambdaX iY - iY lambdaX = i[X,Y]"));
  EXPECT_FALSE(failing.count("d^2 = 0"));
  EXPECT_FALSE(failing.count("[lambdaX,lambdaY] = lambda[X,Y]"));
  EXPECT_TRUE(verify_calculus(trivial_module(3), L.c).ok());
}
