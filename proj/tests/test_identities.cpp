#include <gtest/gtest.h>

#include "zslab/identities.hpp"

using namespace zslab;

namespace {

SymbolicLength L(const char* s) { return parse_length(s); }

std::vector<std::int64_t> coefs(const CountIdentity& I) { return I.coefficients(); }

}  // namespace

TEST(BaseIdentity, Shapes) {
  const auto b4 = base_identity(4);
  EXPECT_EQ(b4.domain, L("4p-3"));
  EXPECT_EQ(coefs(b4), (std::vector<std::int64_t>{1, -1, 1, -1}));
  EXPECT_EQ(b4.terms.back().length, L("3p"));
  const auto b9 = base_identity(9);
  EXPECT_EQ(coefs(b9), (std::vector<std::int64_t>{1, -1, 1, -1, 1, -1, 1, -1, 1}));
  EXPECT_EQ(b9.terms.back().length, L("8p"));
  EXPECT_EQ(coefs(base_identity(5)), (std::vector<std::int64_t>{1, -1, 1, -1, 1}));
  EXPECT_THROW(base_identity(3), UsageError);
  EXPECT_THROW(base_identity(10), UsageError);
}

TEST(RemarkIdentity, Shape) {
  const auto I = remark_identity_zp2();
  EXPECT_EQ(I.constant, 1);
  ASSERT_EQ(I.terms.size(), 4u);
  EXPECT_EQ(I.terms[0].length, L("p-1"));
  EXPECT_EQ(I.terms[2].length, L("2p-1"));
  EXPECT_EQ(I.d, 2);
}

TEST(Lift, PrintedTuples) {
  EXPECT_EQ(coefs(lift_identity(remark_identity_zp2(), L("4p-3"))), (std::vector<std::int64_t>{3, -2, -2, 1, 1}));
  EXPECT_EQ(coefs(lift_identity(base_identity(4), L("5p-3"))), (std::vector<std::int64_t>{4, -3, 2, -1}));
  EXPECT_EQ(coefs(lift_identity(base_identity(6), L("7p-3"))), (std::vector<std::int64_t>{6, -5, 4, -3, 2, -1}));
  const std::vector<std::vector<std::int64_t>> at9 = {{56, -21, 6, -1},
                                                      {70, -35, 15, -5, 1},
                                                      {56, -35, 20, -10, 4, -1},
                                                      {28, -21, 15, -10, 6, -3, 1},
                                                      {8, -7, 6, -5, 4, -3, 2, -1}};
  for (int k = 4; k <= 8; ++k) EXPECT_EQ(coefs(lift_identity(base_identity(k), L("9p-3"))), at9[k - 4]) << k;
  EXPECT_EQ(lift_identity(base_identity(4), L("9p-3")).p_min, 11);
  EXPECT_THROW(lift_identity(base_identity(6), L("5p-3")), UsageError);
}

TEST(Lift, IdentityLiftIsNoop) {
  for (int k = 4; k <= 9; ++k) {
    const auto I = base_identity(k);
    EXPECT_EQ(coefs(lift_identity(I, I.domain)), coefs(I));
  }
}

// lift(lift(I, M), M') == C(M' - D, M - D) * lift(I, M')
TEST(Lift, TwoStepLaw) {
  int checked = 0;
  for (int k = 4; k <= 8; ++k)
    for (int m = k; m <= 9; ++m)
      for (int m2 = m; m2 <= 9; ++m2) {
        const auto I = base_identity(k);
        const SymbolicLength M(m, -3), M2(m2, -3);
        const auto twice = lift_identity(lift_identity(I, M), M2);
        const auto once = lift_identity(I, M2);
        const std::int64_t scale = symbolic_binom(M2 - I.domain, M - I.domain).value;
        ASSERT_EQ(twice.constant, scale * once.constant);
        // Terms dropped by a zero coefficient on one side are zero on the other.
        for (const auto& t : once.terms) {
          std::int64_t other = 0;
          for (const auto& u : twice.terms)
            if (u.length == t.length) other = u.coefficient;
          EXPECT_EQ(other, scale * t.coefficient);
        }
        ++checked;
      }
  EXPECT_GT(checked, 30);
}

TEST(Lift, InstantiatedCoefficientsMatchExactBinomials) {
  for (int k = 4; k <= 8; ++k)
    for (int m = k; m <= 9; ++m) {
      const auto I = lift_identity(base_identity(k), SymbolicLength(m, -3));
      for (std::int64_t p : {11, 13, 17}) {
        if (p < I.p_min) continue;
        const std::int64_t D = k * p - 3, T = m * p - 3;
        EXPECT_EQ(mod_floor(I.constant, p), mod_floor(binom_exact(T, D), p));
        for (const auto& t : I.terms) {
          const std::int64_t l = t.length.instantiate(p);
          const std::int64_t sign = (t.length.q % 2 == 0) ? 1 : -1;
          EXPECT_EQ(mod_floor(t.coefficient, p), mod_floor(sign * binom_exact(T - l, D - l), p));
        }
      }
    }
}

TEST(Verify, SmallCampaigns) {
  EXPECT_TRUE(verify_identity(base_identity(4), 5, 200, 1).pass());
  const auto r3 = verify_identity(remark_identity_zp2(), 3, 200, 2);
  EXPECT_TRUE(r3.pass());
  EXPECT_EQ(r3.trials, 200);
  EXPECT_TRUE(verify_identity(remark_identity_zp2(), 5, 200, 3).pass());
}

TEST(Verify, CorruptedIdentityFailsWithWitness) {
  auto bad = base_identity(4);
  bad.constant = 2;
  const auto rep = verify_identity(bad, 5, 50, 4);
  EXPECT_FALSE(rep.pass());
  EXPECT_EQ(rep.status(), "fail");
  ASSERT_FALSE(rep.failures.empty());
  const auto& J = rep.failures.front();
  EXPECT_EQ(J.length(), 17);
  const auto res = zero_sum_residues(J, 15);
  EXPECT_NE(bad.instantiate(5).evaluate(res), 0);
}

TEST(Verify, OutOfDomainNeedsFlag) {
  const auto lifted = lift_identity(base_identity(4), L("9p-3"));
  EXPECT_THROW(verify_identity(lifted, 5, 1, 0), UsageError);
  VerifyOptions o;
  o.allow_out_of_domain = true;
  const auto r = verify_identity(lifted, 5, 20, 0, o);
  EXPECT_TRUE(r.out_of_domain);
}

TEST(Verify, ReproducibleAcrossJobCounts) {
  auto bad = base_identity(5);
  bad.constant = 3;
  VerifyOptions one, many;
  many.jobs = 4;
  const auto a = verify_identity(bad, 5, 40, 9, one);
  const auto b = verify_identity(bad, 5, 40, 9, many);
  EXPECT_EQ(a.failure_count, b.failure_count);
  EXPECT_EQ(a.failures, b.failures);
}

TEST(Verify, SystemsAtLargerPrimes) {
  VerifyOptions o;
  o.jobs = 0;
  for (int k = 4; k <= 9; ++k) {
    const auto reps = verify_identities(size_system_identities(k), 13, 200, 100 + k, o);
    for (const auto& r : reps) EXPECT_TRUE(r.pass()) << r.identity;
  }
}

TEST(Derive, Lemma1Replay) {
  std::vector<ConcreteIdentity> sys;
  for (const auto& I : size_system_identities(5)) sys.push_back(I.instantiate(11));
  const auto d = derive_counts(sys, {{11, 0}, {22, 0}}, {});
  EXPECT_FALSE(d.contradiction);
  EXPECT_EQ(d.at(33), AffineForm::constant(4));
  EXPECT_EQ(d.at(44), AffineForm::constant(3));
}

TEST(Derive, Lemma2Replay) {
  for (std::int64_t p : {11, 13, 17, 19}) {
    const int P = static_cast<int>(p);
    std::vector<ConcreteIdentity> sys;
    for (const auto& I : size_system_identities(7)) sys.push_back(I.instantiate(p));
    const auto d = derive_counts(sys, {{P, 0}, {3 * P, 0}}, {});
    EXPECT_EQ(d.at(2 * P).reduced(p), AffineForm::constant(mod_floor(-5, p)));
    EXPECT_EQ(d.at(4 * P).reduced(p), AffineForm::constant(15 % p));
    EXPECT_EQ(d.at(5 * P).reduced(p), AffineForm::constant(16 % p));
  }
}

TEST(Derive, ContradictionAndOrientation) {
  const auto I = base_identity(5).instantiate(11);
  const auto d = derive_counts({I}, {{11, 0}, {22, 0}, {33, 0}, {44, 0}}, {});
  ASSERT_TRUE(d.contradiction);
  EXPECT_EQ(d.contradiction->residue, AffineForm::constant(1));
  EXPECT_THROW(derive_counts({I}, {{11, 0}}, {}), CannotOrient);
}

TEST(Derive, SolutionsSubstituteBackToZero) {
  for (int k = 5; k <= 9; ++k)
    for (std::int64_t p : {11, 13, 23}) {
      const int P = static_cast<int>(p);
      std::vector<ConcreteIdentity> sys;
      for (const auto& I : size_system_identities(k)) sys.push_back(I.instantiate(p));
      const auto d = derive_counts(sys, {{P, 0}}, {{2 * P, "x"}});
      ASSERT_FALSE(d.contradiction);
      for (const auto& I : sys) {
        AffineForm acc = AffineForm::constant(I.constant);
        for (const auto& [l, c] : I.terms) acc = acc + c * d.at(l);
        EXPECT_TRUE(acc.is_zero_mod(p)) << I.name << " p=" << p << " residual " << acc.to_string();
      }
    }
}

TEST(Relations, DoubleCounting) {
  const auto r = relate_parameters(L("4p-3"), L("5p-3"), L("2p"), "r");
  EXPECT_EQ(r.lhs.front().coefficient, 2);
  EXPECT_EQ(r.rhs.front().coefficient, 4);
  const auto t = relate_parameters(L("4p-3"), L("6p-3"), L("2p"), "t");
  EXPECT_EQ(t.lhs.front().coefficient, 3);
  EXPECT_EQ(t.rhs.front().coefficient, 10);
  EXPECT_EQ(t.to_string(), "3t == 10c");
  const auto k = relate_parameters(L("4p-3"), L("9p-3"), L("2p"), "k");
  EXPECT_EQ(k.lhs.front().coefficient, 6);
  EXPECT_EQ(k.rhs.front().coefficient, 56);
}

TEST(Relations, PrintedVersusRecomputed) {
  const auto checks = check_printed_relations(11);
  ASSERT_EQ(checks.size(), printed_parameter_relations().size());
  std::map<std::string, bool> implied;
  for (const auto& c : checks) implied[c.relation.to_string()] = c.implied;
  EXPECT_TRUE(implied.at("3t == 10c"));
  EXPECT_TRUE(implied.at("r == 2c"));
}

TEST(Theorem1, Chain) {
  for (std::int64_t p : {11, 13, 17, 19, 23}) {
    const auto ch = theorem1_chain(p);
    EXPECT_EQ(ch.t, mod_floor(-6, p));
    EXPECT_EQ(ch.relation.to_string(), "3t == 10c");
    EXPECT_EQ(ch.c_coefficient, 5);
    EXPECT_EQ(ch.c_rhs, -9);
    EXPECT_EQ(mod_floor(5 * ch.c + 9, p), 0);
  }
}
