#include <gtest/gtest.h>

#include "zslab/counting.hpp"

using namespace zslab;

namespace {

// Independent oracle: iterate over index subsets as bitmasks.
BigInt bitmask_count(const ZSequence& J, int length, const GroupElement& target) {
  const auto pos = J.positions();
  const int n = J.modulus(), d = J.dimension();
  BigInt total = 0;
  for (std::uint32_t mask = 0; mask < (1u << pos.size()); ++mask) {
    if (__builtin_popcount(mask) != length) continue;
    bool ok = true;
    for (int c = 0; c < d && ok; ++c) {
      int s = 0;
      for (std::size_t i = 0; i < pos.size(); ++i)
        if (mask >> i & 1u) s += pos[i].coords[c];
      ok = s % n == target.coords[c];
    }
    if (ok) ++total;
  }
  return total;
}

}  // namespace

TEST(Count, Examples) {
  ZSequence a(3, 3);
  a.add({0, 0, 0}, 3);
  EXPECT_EQ(count_zero_sum(a, 3).value, 1);

  ZSequence b(3, 3);
  b.add({1, 0, 0}, 5);
  EXPECT_EQ(count_zero_sum(b, 3).value, 10);

  const auto t2 = theorem2_construction(PrimeModulus(3));
  EXPECT_EQ(count_zero_sum(t2, 3).value, 0);
  EXPECT_EQ(count_zero_sum(t2, 6).value, 0);

  for (int p : {3, 5, 7}) {
    ZSequence c(p, 3);
    c.add({1, 0, 0}, 2 * p - 1);
    const auto r = count_zero_sum(c, p, CountMode::mod);
    EXPECT_EQ(r.value, 1);
    EXPECT_EQ(r.modulus, p);
  }
}

TEST(Count, RangeErrors) {
  ZSequence a(3, 1);
  a.add({1}, 2);
  EXPECT_THROW(count_zero_sum(a, 3), UsageError);
  EXPECT_THROW(count_zero_sum(a, -1), UsageError);
  EXPECT_THROW(count_subsequences(a, 1, {0, 0}), UsageError);
}

TEST(Count, EmptyAndZeroLength) {
  ZSequence e(5, 2);
  EXPECT_EQ(count_zero_sum(e, 0).value, 1);
  EXPECT_EQ(count_subsequences(e, 0, {1, 0}).value, 0);
  EXPECT_EQ(brute_force_count(e, 0, e.zero()).value, 1);
  ZSequence two(2, 1);
  two.add({1}, 2);
  EXPECT_EQ(brute_force_count(two, 2, two.zero()).value, 1);
}

TEST(Profile, ClosedFormBinomials) {
  ZSequence J(3, 3);
  J.add({0, 0, 0}, 24);
  std::vector<int> lens;
  for (int l = 3; l <= 24; l += 3) lens.push_back(l);
  const auto v = count_profile(J, lens, CountMode::exact);
  ASSERT_EQ(v.entries.size(), lens.size());
  for (const auto& [l, c] : v.entries) EXPECT_EQ(c.value, binom_exact(24, l));
  EXPECT_EQ(count_profile(J, {0}).entries.front().second.value, 1);
  EXPECT_EQ(count_profile(known_extremal("kemnitz-d2", 3), {3}).at(3).value, 0);
}

TEST(Oracle, DpMatchesBruteForceAndBitmasks) {
  const int moduli[] = {2, 3, 5};
  int instances = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const int n = moduli[i % 3];
    const int d = 1 + static_cast<int>(i / 3 % 2);
    const int len = static_cast<int>(mix_seed(i) % 11);
    const auto J = campaign_sequence(n, d, len, 99, i);
    const std::size_t G = group_order(n, d);
    for (int l = 0; l <= J.length(); ++l)
      for (std::size_t t = 0; t < G; ++t) {
        const auto target = unflatten(t, n, d);
        const auto dp = count_subsequences(J, l, target, CountMode::exact).value;
        ASSERT_EQ(dp, brute_force_count(J, l, target).value);
        ASSERT_EQ(dp, bitmask_count(J, l, target));
      }
    ++instances;
  }
  EXPECT_EQ(instances, 200);
}

TEST(Invariants, MassConservation) {
  for (std::uint64_t i = 0; i < 30; ++i) {
    const int n = 2 + static_cast<int>(i % 4);
    const auto J = campaign_sequence(n, 2, 9 + static_cast<int>(i % 5), 5, i);
    const std::size_t G = group_order(n, 2);
    for (int l = 0; l <= J.length(); ++l) {
      BigInt total = 0;
      for (std::size_t t = 0; t < G; ++t) total += count_subsequences(J, l, unflatten(t, n, 2)).value;
      EXPECT_EQ(total, binom_exact(J.length(), l));
    }
  }
}

TEST(Invariants, Complementation) {
  int tested = 0;
  for (std::uint64_t i = 0; tested < 20 && i < 2000; ++i) {
    auto J = campaign_sequence(3, 3, 10, 17, i);
    // close the sequence so its total sum is zero
    const auto s = J.total_sum();
    GroupElement fix;
    for (int c : s.coords) fix.coords.push_back((3 - c) % 3);
    J.add(fix);
    ASSERT_EQ(J.total_sum(), J.zero());
    for (int l = 0; l <= J.length(); ++l)
      EXPECT_EQ(count_zero_sum(J, l).value, count_zero_sum(J, J.length() - l).value);
    ++tested;
  }
  EXPECT_EQ(tested, 20);
}

TEST(Invariants, ModeCoherence) {
  for (std::uint64_t i = 0; i < 40; ++i) {
    const int p = (i % 2) ? 5 : 7;
    const auto J = campaign_sequence(p, 3, 30, 3, i);
    std::vector<int> lens;
    for (int l = 0; l <= J.length(); ++l) lens.push_back(l);
    const auto exact = count_profile(J, lens, CountMode::exact);
    const auto mod = count_profile(J, lens, CountMode::mod);
    const auto res = zero_sum_residues(J, J.length());
    for (int l = 0; l <= J.length(); ++l) {
      EXPECT_EQ(exact.at(l).residue(p), mod.at(l).value);
      EXPECT_EQ(res[l], mod.at(l).value);
      EXPECT_EQ(zero_sum_exists(J, l), exact.at(l).value > 0);
    }
  }
}

TEST(BruteForce, BudgetRefusal) {
  ZSequence J(3, 1);
  J.add({1}, 40);
  EXPECT_THROW(brute_force_count(J, 20, J.zero()), BudgetExceeded);
  EXPECT_NO_THROW(brute_force_count(J, 2, J.zero()));
  EXPECT_THROW(brute_force_count(J, 3, J.zero(), 100), BudgetExceeded);
}
