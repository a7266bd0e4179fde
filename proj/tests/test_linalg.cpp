#include <dgx/lie.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace dgx;

namespace {

SparseMatrix dense(int r, int c, std::vector<int> v) {
  std::vector<Triplet> ts;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j)
      if (v[i * c + j]) ts.emplace_back(i, j, Q(v[i * c + j]));
  return SparseMatrix::from_triplets(r, c, ts);
}

SparseMatrix random_matrix(std::mt19937_64& rng, int r, int c, int rank_cap) {
  // product of two random factors keeps the rank at most rank_cap
  std::uniform_int_distribution<int> u(-3, 3);
  std::vector<Triplet> a, b;
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < rank_cap; ++k)
      if (int x = u(rng)) a.emplace_back(i, k, Q(x));
  for (int k = 0; k < rank_cap; ++k)
    for (int j = 0; j < c; ++j)
      if (int x = u(rng)) b.emplace_back(k, j, Q(x) / Q(1 + (j % 3)));
  return SparseMatrix::from_triplets(r, rank_cap, a) * SparseMatrix::from_triplets(rank_cap, c, b);
}

}  // namespace

TEST(Rank, Examples) {
  EXPECT_EQ(rank(SparseMatrix(3, 3)), 0);
  EXPECT_EQ(rank(SparseMatrix::identity(4)), 4);
  EXPECT_EQ(rank(dense(2, 3, {1, 2, 3, 2, 4, 6})), 1);
}

TEST(Kernel, Examples) {
  EXPECT_EQ(kernel_basis(SparseMatrix::identity(2)).dim(), 0);
  Subspace k = kernel_basis(dense(1, 2, {1, 1}));
  ASSERT_EQ(k.dim(), 1);
  EXPECT_EQ(coeff(k.basis[0], 0), -coeff(k.basis[0], 1));
  EXPECT_NE(coeff(k.basis[0], 0), 0);
  SparseMatrix m = dense(2, 3, {1, 2, 3, 2, 4, 6});
  Subspace k2 = kernel_basis(m);
  ASSERT_EQ(k2.dim(), 2);
  for (auto& v : k2.basis) EXPECT_TRUE(m.apply(v).empty());
  EXPECT_EQ(rank(k2.inclusion()), 2);
}

TEST(Solve, Examples) {
  std::vector<Q> b{Q(3), Q(-1, 2), Q(7)};
  EXPECT_EQ(*solve(SparseMatrix::identity(3), b), b);
  EXPECT_FALSE(solve(SparseMatrix(2, 2), {Q(1), Q(0)}).has_value());
  auto x = solve(dense(2, 2, {2, 0, 0, 3}), {Q(1), Q(1)});
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ((*x)[0], Q(1, 2));
  EXPECT_EQ((*x)[1], Q(1, 3));
  EXPECT_THROW(solve(SparseMatrix::identity(2), {Q(1)}), std::invalid_argument);
}

TEST(Rank, RankNullityAndSolveRandom) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 60; ++t) {
    int r = 1 + t % 7, c = 1 + (t * 5) % 8, cap = 1 + t % 4;
    SparseMatrix m = random_matrix(rng, r, c, cap);
    Subspace k = kernel_basis(m);
    EXPECT_EQ(rank(m) + k.dim(), c);
    for (auto& v : k.basis) EXPECT_TRUE(m.apply(v).empty());
    // b in the image is always solved exactly
    SparseVec x0{{0, Q(1)}, {c - 1, Q(-2, 3)}};
    if (c == 1) x0 = {{0, Q(5)}};
    SparseVec bx = m.apply(x0);
    std::vector<Q> b(r);
    for (auto& [i, q] : bx) b[i] = q;
    auto x = solve(m, b);
    ASSERT_TRUE(x.has_value());
    SparseVec xs;
    for (int i = 0; i < c; ++i)
      if ((*x)[i] != 0) xs.emplace_back(i, (*x)[i]);
    EXPECT_EQ(m.apply(xs), bx);
  }
}

TEST(Homology, Examples) {
  ChainComplex two(GradedVectorSpace({0, 1}, {"a", "b"}), SparseMatrix::from_triplets(2, 2, {{0, 1, Q(1)}}), -1, 2);
  EXPECT_EQ(two.homology_dimension(0), 0);
  EXPECT_EQ(two.homology_dimension(1), 0);
  ChainComplex zero(GradedVectorSpace({0, 1, 1, 2}, {"a", "b", "c", "d"}), SparseMatrix(4, 4), -1, 3);
  EXPECT_EQ(zero.homology_dimension(1), 2);
  EXPECT_EQ(zero.homology_dimension(2), 1);
  CCE c = lie_cce(abelian(2));
  ChainComplex cx = c.calc.complex();
  EXPECT_EQ(cx.homology_dimension(0), 1);
  EXPECT_EQ(cx.homology_dimension(1), 2);
  EXPECT_EQ(cx.homology_dimension(2), 1);
}

TEST(Homology, TruncationIsRejected) {
  ChainComplex cx(GradedVectorSpace({0, 1}, {"a", "b"}), SparseMatrix(2, 2), 0, 1);
  EXPECT_THROW(cx.homology_dimension(0), truncation_error);
  EXPECT_THROW(cx.homology_dimension(5), truncation_error);
}

TEST(Homology, InvariantUnderRelabelingAndScaling) {
  CCE c = lie_cce(heisenberg3());
  ChainComplex cx = c.calc.complex();
  int n = cx.space.dim();
  // scale each degree block of d by a different nonzero constant
  SparseMatrix d2 = cx.d;
  for (int col = 0; col < n; ++col) d2.set_col(col, scaled(cx.d.col(col), Q(cx.space.degree(col) + 2) / 3));
  // reverse the basis inside every degree
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) {
    auto [a, b] = cx.space.range(cx.space.degree(i));
    perm[i] = a + b - 1 - i;
  }
  std::vector<Triplet> ts;
  for (auto& [r, col, q] : d2.triplets()) ts.emplace_back(perm[r], perm[col], q);
  ChainComplex cy(cx.space, SparseMatrix::from_triplets(n, n, ts), cx.lo, cx.hi);
  for (int j = 0; j <= 3; ++j) EXPECT_EQ(cx.homology_dimension(j), cy.homology_dimension(j)) << j;
}

TEST(Homology, RepresentativesAreCyclesNotBoundaries) {
  CCE c = lie_cce(so3());
  ChainComplex cx = c.calc.complex();
  Homology h = cx.homology(3);
  ASSERT_EQ(h.representatives.size(), 1u);
  EXPECT_TRUE(cx.is_cycle(h.representatives[0]));
  EXPECT_FALSE(cx.is_boundary(h.representatives[0], 3));
}
