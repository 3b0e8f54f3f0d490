#include <gtest/gtest.h>

#include "zslab/search.hpp"

using namespace zslab;

namespace {

void expect_valid_witness(const ZeroSumConstantResult& r) {
  ASSERT_TRUE(r.complete);
  ASSERT_TRUE(r.value);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->length(), *r.value - 1);
  EXPECT_EQ(brute_force_count(*r.witness, r.k * r.n, r.witness->zero()).value, 0);
  EXPECT_TRUE(r.monotone);
}

}  // namespace

TEST(HasZeroSum, Examples) {
  EXPECT_FALSE(has_zero_sum(theorem2_construction(PrimeModulus(5)), 5));
  ZSequence J(3, 3);
  J.add({1, 0, 0}, 3);
  EXPECT_TRUE(has_zero_sum(J, 3));
  EXPECT_FALSE(has_zero_sum(known_extremal("egz-d1", 4), 4));
  EXPECT_TRUE(has_zero_sum(J, 0));
}

TEST(SConstant, Egz) {
  for (int n = 2; n <= 7; ++n) {
    const auto r = s_constant(n, 1, 1);
    EXPECT_EQ(r.value, 2 * n - 1) << n;
    expect_valid_witness(r);
  }
}

TEST(SConstant, Kemnitz) {
  const auto a = s_constant(2, 2, 1);
  EXPECT_EQ(a.value, 5);
  expect_valid_witness(a);
  const auto b = s_constant(3, 2, 1);
  EXPECT_EQ(b.value, 9);
  expect_valid_witness(b);
  const auto c = s_constant(4, 2, 1);
  EXPECT_EQ(c.value, 13);
  expect_valid_witness(c);
}

TEST(SConstant, CubeOverZ2) {
  const auto r = s_constant(2, 3, 1);
  EXPECT_EQ(r.value, 9);
  EXPECT_EQ(*r.value, (1 << 3) + 1);
  expect_valid_witness(r);
  EXPECT_EQ(r.witness->distinct(), 8u);
}

TEST(SConstant, HigherMultiples) {
  // two disjoint n-term zero-sums need kn + n - 1 elements in Z_n
  for (int n = 2; n <= 4; ++n)
    for (int k = 1; k <= 3; ++k) {
      const auto r = s_constant(n, 1, k);
      EXPECT_EQ(r.value, k * n + n - 1) << n << " " << k;
      expect_valid_witness(r);
    }
}

TEST(SConstant, SymmetryReductionIsSound) {
  for (auto [n, d] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {5, 1}, {2, 2}, {3, 2}, {2, 3}, {4, 2}}) {
    SearchOptions none;
    none.permute_coordinates = false;
    none.translate_to_zero = false;
    SearchOptions perm;
    perm.translate_to_zero = false;
    const auto full = s_constant(n, d, 1);
    EXPECT_EQ(s_constant(n, d, 1, none).value, full.value);
    EXPECT_EQ(s_constant(n, d, 1, perm).value, full.value);
  }
}

TEST(SConstant, ParallelDeterministic) {
  SearchOptions serial, par;
  serial.translate_to_zero = par.translate_to_zero = false;
  par.jobs = 4;
  const auto a = s_constant(3, 2, 1, serial);
  const auto b = s_constant(3, 2, 1, par);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.free_counts, b.free_counts);
  EXPECT_EQ(a.witness, b.witness);
}

TEST(SConstant, BudgetGivesBrackets) {
  SearchOptions o;
  o.node_budget = 50;
  const auto r = s_constant(3, 2, 1, o);
  EXPECT_FALSE(r.complete);
  EXPECT_FALSE(r.value);
  EXPECT_LE(r.lower, 9);
  EXPECT_GE(r.upper, 9);
  EXPECT_EQ(r.upper, pigeonhole_bound(3, 2, 1));
}

TEST(SConstant, ConstructionLowerBound) {
  for (int n = 2; n <= 4; ++n)
    for (int d = 1; d <= 2; ++d) {
      const auto cube = cube_construction(n, d);
      EXPECT_FALSE(has_zero_sum(cube, n));
      EXPECT_EQ(s_constant(n, d, 1).construction_lower, cube.length() + 1);
    }
}

TEST(Campaign, LemmaFamilySmall) {
  for (const char* id : {"lemma1", "lemma2", "corollary-4p", "corollary-5p"}) {
    const auto r = verify_statement(id, 3, 300, 5);
    EXPECT_EQ(r.status, "pass") << id;
    EXPECT_EQ(r.hypothesis_realized, 300);
    EXPECT_TRUE(r.counterexamples.empty());
  }
  EXPECT_EQ(verify_statement("lemma1", 3, 10, 5).length, 15);
}

TEST(Campaign, Reproducible) {
  CampaignOptions par;
  par.jobs = 3;
  const auto a = verify_statement("lemma2", 5, 40, 123);
  const auto b = verify_statement("lemma2", 5, 40, 123, par);
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.hypothesis_realized, b.hypothesis_realized);
  EXPECT_EQ(a.counterexample_count, b.counterexample_count);
}

TEST(Campaign, Application1IsVacuous) {
  const auto r = verify_statement("application1", 5, 200, 9);
  EXPECT_EQ(r.length, 42);
  EXPECT_EQ(r.hypothesis_realized, 0);
  EXPECT_EQ(r.status, "vacuous");
  EXPECT_NE(r.status, "pass");
  EXPECT_FALSE(r.note.empty());
}

TEST(Campaign, Theorem1HypothesisReportsRealization) {
  const auto r = verify_statement("theorem1-hypothesis", 3, 60, 2);
  EXPECT_EQ(r.length, 18);
  EXPECT_EQ(r.counterexample_count, 0);
  EXPECT_TRUE(r.status == "pass" || r.status == "vacuous");
  EXPECT_EQ(r.hypothesis_realized + r.undetermined <= 60, true);
}

TEST(Campaign, Theorem2) {
  const auto r3 = verify_statement("theorem2", 3, 1, 0);
  EXPECT_EQ(r3.status, "pass");
  const auto r7 = verify_statement("theorem2", 7, 1, 0);
  EXPECT_EQ(r7.status, "pass");
  std::map<std::string, std::string> stats(r7.stats.begin(), r7.stats.end());
  EXPECT_EQ(stats.at("sub_multisets_weighted"), "351");
  EXPECT_EQ(stats.at("sub_multisets_with_2p_zero_sum"), "0");
}

TEST(Campaign, Errors) {
  EXPECT_THROW(verify_statement("lemma9", 3, 1, 0), UsageError);
  EXPECT_THROW(verify_statement("lemma1", 4, 1, 0), UsageError);
}

TEST(Campaign, SubMultisetCount) {
  ZSequence J(3, 1);
  J.add({0}, 2);
  J.add({1}, 1);
  EXPECT_EQ(distinct_sub_multiset_count(J, 2), 2);
  EXPECT_EQ(distinct_sub_multiset_count(J, 0), 1);
  const auto t = theorem2_construction(PrimeModulus(5));
  BigInt n = 0;
  for_each_sub_multiset(t, 17, [&](const std::vector<int>&, const BigInt&) { ++n; });
  EXPECT_EQ(distinct_sub_multiset_count(t, 17), n);
}
