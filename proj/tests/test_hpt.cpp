#include <dgx/hpt.hpp>

#include <gtest/gtest.h>

using namespace dgx;

namespace {

bool same(const Contraction& a, const Contraction& b) {
  return a.dM == b.dM && a.dN == b.dN && a.nabla == b.nabla && a.pi == b.pi && a.h == b.h;
}

// M = <x0, y0, x1>, d x1 = x0, contracted onto N = <y0>
Contraction toy() {
  Contraction C;
  C.M = GradedVectorSpace({0, 0, 1}, {"x0", "y0", "x1"});
  C.N = GradedVectorSpace({0}, {"y0"});
  C.dM = SparseMatrix::from_triplets(3, 3, {{0, 2, Q(1)}});
  C.dN = SparseMatrix(1, 1);
  C.nabla = SparseMatrix::from_triplets(3, 1, {{1, 0, Q(1)}});
  C.pi = SparseMatrix::from_triplets(1, 3, {{0, 1, Q(1)}});
  C.h = SparseMatrix::from_triplets(3, 3, {{2, 0, Q(-1)}});
  return C;
}

}  // namespace

TEST(ToyContraction, PerturbationByXToY) {
  Contraction C = toy();
  ASSERT_TRUE(check_contraction(C).ok());
  SparseMatrix delta = SparseMatrix::from_triplets(3, 3, {{1, 2, Q(1)}});
  Contraction P = perturb(C, delta, 3);
  EXPECT_TRUE(P.dN.is_zero());
  EXPECT_EQ(P.h, C.h);
  EXPECT_EQ(P.nabla, C.nabla);
  // π' picks up πδh: x0 ↦ -y0
  EXPECT_EQ(P.pi, SparseMatrix::from_triplets(1, 3, {{0, 0, Q(-1)}, {0, 1, Q(1)}}));
  ContractionReport r = check_contraction(P);
  EXPECT_TRUE(r.ok()) << r.chain_nabla << r.chain_pi << r.retraction << r.homotopy << r.hh << r.h_nabla << r.pi_h;
}

TEST(ToyContraction, ZeroPerturbationIsIdentity) {
  Contraction C = toy();
  EXPECT_TRUE(same(perturb(C, SparseMatrix(3, 3), 3), C));
}

TEST(ToyContraction, NonTerminatingSeriesIsAnError) {
  Contraction C;
  C.M = GradedVectorSpace({0, 1}, {"x0", "x1"});
  C.N = GradedVectorSpace();
  C.dM = SparseMatrix::from_triplets(2, 2, {{0, 1, Q(1)}});
  C.dN = SparseMatrix(0, 0);
  C.nabla = SparseMatrix(2, 0);
  C.pi = SparseMatrix(0, 2);
  C.h = SparseMatrix::from_triplets(2, 2, {{1, 0, Q(-1)}});
  ASSERT_TRUE(check_contraction(C).ok());
  // hδ fixes x1, so Σ (hδ)^n never stops
  SparseMatrix delta = SparseMatrix::from_triplets(2, 2, {{0, 1, Q(-1)}});
  EXPECT_THROW(perturb(C, delta, 5), hpt_cap_error);
}

TEST(RandomHPT, PerturbedDataSatisfiesAllIdentities) {
  int nontrivial = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    RandomHPTInstance I = random_hpt_instance(s);
    ASSERT_TRUE(check_contraction(I.base).ok()) << s;
    nontrivial += !I.delta.is_zero();
    // (d + δ)² = 0 and δ lowers the weight
    SparseMatrix D = I.base.dM + I.delta;
    EXPECT_TRUE((D * D).is_zero()) << s;
    for (auto& [r, c, q] : I.delta.triplets()) EXPECT_LT(I.weight[r], I.weight[c]) << s;
    Contraction P = perturb(I.base, I.delta, I.depth);
    ContractionReport rep = check_contraction(P);
    EXPECT_TRUE(rep.ok()) << s;
    EXPECT_TRUE((P.dN * P.dN).is_zero()) << s;
  }
  EXPECT_GE(nontrivial, 90);
}

TEST(RandomHPT, IdempotentAtZero) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    RandomHPTInstance I = random_hpt_instance(s);
    int n = I.base.M.dim();
    EXPECT_TRUE(same(perturb(I.base, SparseMatrix(n, n), I.depth), I.base)) << s;
  }
}

TEST(RandomHPT, AdditiveInStages) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    RandomHPTInstance I = random_hpt_instance(s);
    SparseMatrix d2 = second_perturbation(I, s + 500);
    Contraction two = perturb(perturb(I.base, I.delta, I.depth), d2, I.depth);
    Contraction one = perturb(I.base, I.delta + d2, I.depth);
    EXPECT_TRUE(same(one, two)) << s;
    EXPECT_TRUE(check_contraction(two).ok()) << s;
  }
}

TEST(RandomHPT, NormalizeRestoresSideConditions) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    RandomHPTInstance I = random_hpt_instance(s);
    Contraction spoiled = spoil_side_conditions(I.base, I.weight, s + 1000);
    EXPECT_EQ(check_contraction(spoiled).homotopy, 0u) << s;
    Contraction fixed = normalize(spoiled);
    EXPECT_TRUE(check_contraction(fixed).ok()) << s;
    EXPECT_TRUE(check_contraction(perturb(fixed, I.delta, I.depth)).ok()) << s;
  }
}

TEST(Compose, ContractionsCompose) {
  Contraction C = toy();
  Contraction id;
  id.M = id.N = C.N;
  id.dM = id.dN = C.dN;
  id.nabla = id.pi = SparseMatrix::identity(1);
  id.h = SparseMatrix(1, 1);
  Contraction K = compose(C, id);
  EXPECT_TRUE(check_contraction(K).ok());
  EXPECT_TRUE(same(K, C));
}
