#include <gtest/gtest.h>

#include <vector>

#include "zslab/arith.hpp"

using namespace zslab;

namespace {

std::vector<std::vector<std::int64_t>> pascal_mod(int N, std::int64_t p) {
  std::vector<std::vector<std::int64_t>> t(static_cast<std::size_t>(N) + 1);
  for (int n = 0; n <= N; ++n) {
    t[n].assign(static_cast<std::size_t>(n) + 1, 1);
    for (int k = 1; k < n; ++k) t[n][k] = (t[n - 1][k - 1] + t[n - 1][k]) % p;
  }
  return t;
}

}  // namespace

TEST(Primality, AgreesWithSieve) {
  std::vector<bool> composite(2000, false);
  for (int i = 2; i < 2000; ++i)
    if (!composite[i])
      for (int j = 2 * i; j < 2000; j += i) composite[j] = true;
  for (int i = 0; i < 2000; ++i) EXPECT_EQ(is_prime(i), i >= 2 && !composite[i]) << i;
}

TEST(Primality, PrimeModulusRejectsComposites) {
  EXPECT_THROW(PrimeModulus(9), UsageError);
  EXPECT_THROW(PrimeModulus(1), UsageError);
  EXPECT_EQ(PrimeModulus(13).value(), 13);
}

TEST(BinomMod, Examples) {
  EXPECT_EQ(binom_mod(17, 12, PrimeModulus(5)), 3);
  EXPECT_EQ(binom_mod(5, 2, PrimeModulus(5)), 0);
  EXPECT_EQ(binom_mod(96, 41, PrimeModulus(11)), 1);
  EXPECT_EQ(binom_mod(3, 7, PrimeModulus(5)), 0);
  EXPECT_EQ(binom_mod(96, 11, PrimeModulus(11)), 8);
}

TEST(BinomMod, PascalOracle) {
  for (std::int64_t p : {2, 3, 5, 7, 11, 13}) {
    const auto t = pascal_mod(300, p);
    const PrimeModulus P(p);
    for (int n = 0; n <= 300; ++n)
      for (int k = 0; k <= n; ++k) ASSERT_EQ(binom_mod(n, k, P), t[n][k]) << n << " " << k << " mod " << p;
  }
}

TEST(BinomMod, ExactAgreesAfterReduction) {
  const PrimeModulus P(7);
  for (int n = 0; n <= 120; n += 7)
    for (int k = 0; k <= n; k += 3) EXPECT_EQ(mod_floor(binom_exact(n, k), 7), binom_mod(n, k, P));
}

TEST(BinomMod, GeneralizedNegativeUpper) {
  for (std::int64_t p : {3, 5, 7, 11}) {
    const PrimeModulus P(p);
    EXPECT_EQ(binom_mod_general(-1, p - 1, P), 1);
    // falling factorial y(y-1)...(y-k+1)/k! evaluated directly
    for (int y = -12; y < 0; ++y)
      for (int k = 0; k <= 4; ++k) {
        BigInt num = 1, den = 1;
        for (int i = 0; i < k; ++i) {
          num *= y - i;
          den *= i + 1;
        }
        EXPECT_EQ(binom_mod_general(y, k, P), mod_floor(BigInt(num / den), p)) << y << " " << k;
      }
  }
}

TEST(ParseLength, Grammar) {
  EXPECT_EQ(parse_length("9p-3"), SymbolicLength(9, -3));
  EXPECT_EQ(parse_length("2p"), SymbolicLength(2, 0));
  EXPECT_EQ(parse_length("p-1"), SymbolicLength(1, -1));
  EXPECT_EQ(parse_length("p"), SymbolicLength(1, 0));
  EXPECT_EQ(parse_length(" 3 p + 2 "), SymbolicLength(3, 2));
  EXPECT_EQ(parse_length("7"), SymbolicLength(0, 7));
}

TEST(ParseLength, ErrorsCarryPosition) {
  try {
    parse_length("9q-3");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 1u);
  }
  try {
    parse_length("9p*3");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 2u);
  }
  EXPECT_THROW(parse_length(""), ParseError);
  EXPECT_THROW(parse_length("p-"), ParseError);
  EXPECT_THROW(parse_length("p-16"), ParseError);
  EXPECT_THROW(parse_length("2p-3x"), ParseError);
}

TEST(ParseLength, RoundTripsThroughToString) {
  for (int q = 0; q <= 9; ++q)
    for (int r = -15; r <= 15; ++r) {
      if (q == 0 && r < 0) continue;
      const SymbolicLength L(q, r);
      EXPECT_EQ(parse_length(L.to_string()), L) << L.to_string();
    }
}

TEST(SymbolicBinom, Examples) {
  const auto a = symbolic_binom(parse_length("4p-3"), parse_length("3p-3"));
  EXPECT_EQ(a.value, 3);
  EXPECT_EQ(a.p_min, 5);
  const auto b = symbolic_binom(parse_length("3p-2"), parse_length("2p-2"));
  EXPECT_EQ(b.value, 2);
  EXPECT_EQ(b.p_min, 3);
  EXPECT_EQ(symbolic_binom(parse_length("6p"), parse_length("2p")).value, 15);
  EXPECT_EQ(symbolic_binom(parse_length("9p-3"), parse_length("7p-3")).value, 28);
}

TEST(SymbolicBinom, TrivialCases) {
  for (const char* s : {"p", "2p-3", "9p-3", "3p+2", "p-1", "5"}) {
    const auto L = parse_length(s);
    EXPECT_EQ(symbolic_binom(L, L).value, 1) << s;
    EXPECT_EQ(symbolic_binom(L, SymbolicLength(0, 0)).value, 1) << s;
  }
}

// Every template pair used by lifting between sizes 3p-3..9p-3 with lengths
// p-1, 2p-1, jp, checked against Lucas at each prime up to 31.
TEST(SymbolicBinom, AgreesWithLucasOnTemplates) {
  std::vector<std::pair<SymbolicLength, SymbolicLength>> pairs;
  std::vector<SymbolicLength> lens{SymbolicLength(1, -1), SymbolicLength(2, -1)};
  for (int j = 0; j <= 8; ++j) lens.push_back(SymbolicLength(j, 0));
  for (int big = 3; big <= 9; ++big)
    for (int small = 3; small <= big; ++small) {
      const SymbolicLength B(big, -3), S(small, -3);
      pairs.push_back({B, S});
      for (const auto& l : lens)
        if (!(S < l)) pairs.push_back({B - l, S - l});
    }
  int checked = 0;
  for (const auto& [num, den] : pairs) {
    SymbolicValue v;
    try {
      v = symbolic_binom(num, den);
    } catch (const UnsupportedCase&) {
      continue;
    }
    for (std::int64_t p = v.p_min; p <= 31; ++p) {
      if (!is_prime(p)) continue;
      const std::int64_t n = num.instantiate(p), k = den.instantiate(p);
      ASSERT_EQ(mod_floor(v.value, p), binom_mod(n, k, PrimeModulus(p)))
          << "C(" << num.to_string() << "," << den.to_string() << ") at p=" << p;
      ++checked;
    }
  }
  EXPECT_GT(checked, 500);
}

TEST(ModArithmetic, InverseAndPow) {
  for (std::int64_t p : {3, 5, 7, 11, 101}) {
    for (std::int64_t a = 1; a < p; ++a) EXPECT_EQ(mul_mod(a, inverse_mod(a, p), p), 1);
    EXPECT_THROW(inverse_mod(p, p), UsageError);
  }
  EXPECT_EQ(pow_mod(10, 0, 7), 1);
  EXPECT_EQ(pow_mod(-1, 11, 13), 12);
  EXPECT_EQ(mod_floor(-7, 5), 3);
}
