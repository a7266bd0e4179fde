#include <dgx/suites.hpp>

#include <gtest/gtest.h>

using namespace dgx;

namespace {

void expect_suite(const SuiteReport& R) {
  for (auto& c : R.checks) EXPECT_TRUE(c.pass()) << R.suite << ": " << c.name << " residual " << c.residual << " " << c.detail;
}

}  // namespace

TEST(RelativeBar, So3Structure) {
  LieAlgebra L = so3();
  RelativeBar B = relative_bar(L, 5);
  EXPECT_TRUE((B.calc.d * B.calc.d).is_zero());
  EXPECT_TRUE((B.d_bar * B.d_bar).is_zero());
  EXPECT_TRUE((B.partial * B.partial).is_zero());
  EXPECT_EQ(coderivation_residual(B.coalg, B.calc.d, -1, 5), 0);
  EXPECT_EQ(coassociativity_residual(B.coalg), 0);
  EXPECT_EQ(counit_residual(B.coalg), 0);
  EXPECT_TRUE(verify_calculus(B.calc, L.c).ok());
  ChainComplex cx = B.calc.complex();
  EXPECT_EQ(cx.homology_dimension(0), 1);
  for (int j = 1; j < 5; ++j) EXPECT_EQ(cx.homology_dimension(j), 0) << j;
}

TEST(RelativeBar, DimensionsSo3) {
  // total degree <= 4: words in letters sIΛ[s so3] (degrees 2,3,4) times Λ'[s so3]
  RelativeBar B = relative_bar(so3(), 4);
  std::vector<int> dims;
  for (int d = 0; d <= 4; ++d) dims.push_back(B.basis.space.dim(d));
  // word dims 1,0,3,3,10 convolved with binomials 1,3,3,1
  EXPECT_EQ(dims, (std::vector<int>{1, 3, 6, 13, 28}));
}

TEST(RelativeBar, CorpusSuite) { expect_suite(suite_bar()); }

TEST(Iota, CogeneratorsAndMaps) { expect_suite(suite_iota()); }

TEST(Iota, RankOneNormalization) {
  LieAlgebra L = abelian(1);
  WeilCoalgebra W = weil_coalgebra(L, 8);
  RelativeBar B = relative_bar(L, 8);
  SparseMatrix I = iota_map(W, B);
  // ι(u^k / k!) is the k-letter word [sv|...|sv]
  for (int k = 1; k <= 4; ++k) {
    std::vector<Mask> word(k, Mask(1));
    SparseVec want{{B.basis.at({word, 0}), Q(factorial(k))}};
    EXPECT_EQ(I.col(W.basis.at({Exps{k}, 0})), want) << k;
  }
}

TEST(Iota, ChainMapSo3ThroughSix) {
  LieAlgebra L = so3();
  WeilCoalgebra W = weil_coalgebra(L, 6);
  RelativeBar B = relative_bar(L, 6);
  SparseMatrix I = iota_map(W, B);
  EXPECT_TRUE((B.calc.d * I - I * W.calc.d).is_zero());
}

TEST(Simplicial, LevelsZeroToTwo) {
  for (auto L : {abelian(1), so3()})
    for (int n = 0; n <= 2; ++n) {
      SimplicialLevelReport r = simplicial_weil_check(L, n, 3);
      EXPECT_TRUE(r.dims_equal) << L.name << " " << n;
      EXPECT_EQ(r.partial_residual, 0u);
      EXPECT_EQ(r.normalized_residual, 0u);
      EXPECT_EQ(r.face_chain_residual, 0u);
      EXPECT_EQ(r.face_sum_residual, 0u);
    }
}
