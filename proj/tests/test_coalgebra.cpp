#include <dgx/small.hpp>

#include <gtest/gtest.h>

using namespace dgx;

namespace {

// coproduct of x as a map (left, right) -> coefficient
std::map<std::pair<int, int>, Q> delta_of(const Coalgebra& c, int x) {
  std::map<std::pair<int, int>, Q> m;
  for (auto& [a, b, q] : c.delta[x]) m[{a, b}] += q;
  return m;
}

}  // namespace

TEST(Exterior, PrimitiveGenerator) {
  auto E = exterior_coalgebra({1}, {"v"}, 1);
  int one = E.basis.at(0), v = E.basis.at(1);
  auto d = delta_of(E.coalg, v);
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ((d[{v, one}]), 1);
  EXPECT_EQ((d[{one, v}]), 1);
  EXPECT_EQ(primitives(E.coalg).dim(), 1);
}

TEST(Exterior, AntipodeOnProductOfTwoGenerators) {
  auto E = exterior_coalgebra({1, 1}, {"v1", "v2"}, 2);
  auto A = exterior_algebra(E);
  SparseMatrix S = antipode(E.coalg, A);
  int v1 = E.basis.at(1), v2 = E.basis.at(2), v12 = E.basis.at(3);
  EXPECT_EQ(S.col(v1), (SparseVec{{v1, Q(-1)}}));
  EXPECT_EQ(S.col(v2), (SparseVec{{v2, Q(-1)}}));
  EXPECT_EQ(S.col(v12), (SparseVec{{v12, Q(1)}}));
  EXPECT_EQ(antipode_residual(E.coalg, A, S), 0);
}

TEST(Exterior, AntipodeLawMixedDegrees) {
  auto E = exterior_coalgebra({1, 1, 3, 5}, {"a", "b", "c", "e"}, 10);
  auto A = exterior_algebra(E);
  EXPECT_EQ(antipode_residual(E.coalg, A, antipode(E.coalg, A)), 0);
}

TEST(Exterior, CounitVanishesInPositiveDegree) {
  auto E = exterior_coalgebra({1, 3}, {"a", "c"}, 4);
  for (int x = 0; x < E.basis.dim(); ++x)
    if (E.basis.space.degree(x) > 0) EXPECT_EQ(E.coalg.counit(x), 0);
  EXPECT_EQ(counit_residual(E.coalg), 0);
}

TEST(Exterior, RejectsEvenGenerator) { EXPECT_THROW(exterior_coalgebra({2}, {"u"}, 4), std::invalid_argument); }

TEST(Exterior, GradedCommutative) {
  auto E = exterior_coalgebra({1, 1, 3}, {"a", "b", "c"}, 5);
  auto A = exterior_algebra(E);
  for (int x = 0; x < E.basis.dim(); ++x)
    for (int y = 0; y < E.basis.dim(); ++y) {
      int dx = E.basis.space.degree(x), dy = E.basis.space.degree(y);
      if (dx + dy > 5) continue;
      EXPECT_EQ(A.product({{x, Q(1)}}, {{y, Q(1)}}), scaled(A.product({{y, Q(1)}}, {{x, Q(1)}}), Q(sgn(dx * dy))));
    }
}

TEST(Symmetric, CoproductOfSquare) {
  auto S = symmetric_coalgebra({2}, {"u"}, 4);
  int one = S.basis.at({0}), u = S.basis.at({1}), u2 = S.basis.at({2});
  auto d = delta_of(S.coalg, u2);
  EXPECT_EQ(d.size(), 3u);
  EXPECT_EQ((d[{u2, one}]), 1);
  EXPECT_EQ((d[{u, u}]), 2);
  EXPECT_EQ((d[{one, u2}]), 1);
}

TEST(Symmetric, Dimensions) {
  auto S = symmetric_coalgebra({2}, {"u"}, 12);
  for (int k = 0; k <= 6; ++k) EXPECT_EQ(S.basis.space.dim(2 * k), 1);
  auto S3 = symmetric_coalgebra({2, 2, 2}, {"a", "b", "c"}, 4);
  EXPECT_EQ(S3.basis.space.dim(4), 6);
  EXPECT_THROW(symmetric_coalgebra({1}, {"x"}, 4), std::invalid_argument);
}

TEST(Symmetric, ProductCommutes) {
  Poly p{{{1, 0}, Q(2)}, {{0, 1}, Q(-1)}}, q{{{2, 1}, Q(1, 3)}, {{0, 0}, Q(5)}};
  EXPECT_EQ(detail::poly_mul(p, q), detail::poly_mul(q, p));
}

TEST(TensorCoalgebra, DeconcatenationAndCounts) {
  auto T = tensor_coalgebra(GradedVectorSpace({2}, {"l"}), 6);
  int one = T.basis.at(Word{}), l = T.basis.at(Word{0});
  auto d = delta_of(T.coalg, l);
  EXPECT_EQ((d[{l, one}]), 1);
  EXPECT_EQ((d[{one, l}]), 1);
  EXPECT_EQ(T.basis.space.dim(4), 1);
  // a second letter of degree 4 adds the one-letter word
  auto T2 = tensor_coalgebra(GradedVectorSpace({2, 4}, {"l", "m"}), 6);
  EXPECT_EQ(T2.basis.space.dim(4), 2);
  EXPECT_EQ(T2.basis.space.dim(6), 3);
  for (int x = 0; x < T2.basis.dim(); ++x) EXPECT_LE(T2.basis.space.degree(x), 6);
  EXPECT_THROW(tensor_coalgebra(GradedVectorSpace({0}, {"z"}), 3), std::invalid_argument);
}

TEST(Coassociativity, AllConstructions) {
  auto E = exterior_coalgebra({1, 1, 3}, {"a", "b", "c"}, 5);
  auto S = symmetric_coalgebra({2, 4}, {"u", "w"}, 10);
  auto T = tensor_coalgebra(GradedVectorSpace({1, 2, 2}, {"x", "y", "z"}), 6);
  for (const Coalgebra* c : {&E.coalg, &S.coalg, &T.coalg}) {
    EXPECT_EQ(coassociativity_residual(*c), 0);
    EXPECT_EQ(counit_residual(*c), 0);
  }
  EXPECT_EQ(cocommutativity_residual(E.coalg), 0);
  EXPECT_EQ(cocommutativity_residual(S.coalg), 0);
  EXPECT_GT(cocommutativity_residual(T.coalg), 0);
}

TEST(KoszulTensor, SignOnDegreeOneElements) {
  auto E = exterior_coalgebra({1}, {"a"}, 2);
  auto A = exterior_algebra(E);
  auto T = koszul_sign_tensor(E.coalg, E.coalg, &A, &A);
  int one = E.basis.at(0), a = E.basis.at(1);
  int a1 = T.basis.at({a, one}), b1 = T.basis.at({one, a}), aa = T.basis.at({a, a}), u = T.basis.at({one, one});
  EXPECT_EQ(T.alg.product({{b1, Q(1)}}, {{a1, Q(1)}}), (SparseVec{{aa, Q(-1)}}));
  EXPECT_EQ(T.alg.product({{a1, Q(1)}}, {{b1, Q(1)}}), (SparseVec{{aa, Q(1)}}));
  EXPECT_EQ(T.alg.product({{u, Q(1)}}, {{u, Q(1)}}), (SparseVec{{u, Q(1)}}));
  EXPECT_EQ(T.alg.unit, u);
}

TEST(KoszulTensor, AssociativeAndCoassociative) {
  auto E = exterior_coalgebra({1, 1, 3}, {"a", "b", "c"}, 5);
  auto A = exterior_algebra(E);
  auto T = koszul_sign_tensor(E.coalg, E.coalg, &A, &A);
  EXPECT_EQ(coassociativity_residual(T.coalg), 0);
  EXPECT_EQ(counit_residual(T.coalg), 0);
  int n = T.basis.dim(), checked = 0;
  auto deg = [&](int i) { return T.basis.space.degree(i); };
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        if (deg(x) + deg(y) + deg(z) > 5) continue;
        SparseVec l = T.alg.product(T.alg.product({{x, Q(1)}}, {{y, Q(1)}}), {{z, Q(1)}});
        SparseVec r = T.alg.product({{x, Q(1)}}, T.alg.product({{y, Q(1)}}, {{z, Q(1)}}));
        EXPECT_EQ(l, r);
        ++checked;
      }
  EXPECT_GT(checked, 20);
}
