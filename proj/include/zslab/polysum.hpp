#pragma once

// The polynomial family built from g(x) = sum x_i^{p-1}:
//   P(x) = C(g-1, p-1) * prod_coords C(s_c(x) - 1, p-1) * prod_{i in T} (C(g, p) - i),
// with s_c(x) = sum_i a_{i,c} x_i^{p-1}. Summed over Z_p^{|J|}, only supports of
// size jp with zero coordinate sums survive, which collapses the sum to
//   sum_j (p-1)^{jp} N^{jp}(J) prod_{i in T} (j - i)  (mod p).

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zslab/arith.hpp"
#include "zslab/counting.hpp"
#include "zslab/error.hpp"
#include "zslab/parallel.hpp"
#include "zslab/sequences.hpp"

namespace zslab {

// Product with an arbitrary factor set T. The full-size family uses
// |J| = 9p - 3 and T = {1..8} minus an omitted pair.
struct DownsizedPolySpec {
  ZSequence J;
  std::vector<int> factors;  // T
};

struct PolyFamilySpec {
  ZSequence J;
  int m = 1;
  int n = 8;

  DownsizedPolySpec as_product() const {
    if (m == n || m < 1 || m > 8 || n < 1 || n > 8) throw UsageError("omitted pair must be two distinct indices in 1..8");
    if (J.length() != 9 * J.modulus() - 3) throw UsageError("sequence length must be 9p-3");
    DownsizedPolySpec s{J, {}};
    for (int i = 1; i <= 8; ++i)
      if (i != m && i != n) s.factors.push_back(i);
    return s;
  }
};

namespace detail {

inline PrimeModulus odd_prime_of(const ZSequence& J) {
  const PrimeModulus p(J.modulus());
  if (p.value() == 2) throw UsageError("polynomial sums are restricted to odd primes");
  return p;
}

inline void check_factors(const DownsizedPolySpec& spec) {
  const int top = spec.J.length() / spec.J.modulus();
  for (int i : spec.factors)
    if (i < 1 || i > top) throw UsageError("factor index " + std::to_string(i) + " out of range");
}

// Evaluates the product from g and the coordinate sums, using the generalized
// binomial (so C(-1, p-1) = 1 at the zero point).
class ProductEvaluator {
public:
  explicit ProductEvaluator(const DownsizedPolySpec& spec)
      : p_(odd_prime_of(spec.J)), factors_(spec.factors), d_(spec.J.dimension()) {
    check_factors(spec);
    const int N = spec.J.length();
    const std::int64_t p = p_.value();
    for (int g = 0; g <= N; ++g) {
      g_minus_one_.push_back(binom_mod_general(g - 1, p - 1, p_));
      g_over_p_.push_back(binom_mod_general(g, p, p_));
    }
    const int max_sum = N * static_cast<int>(p - 1);
    for (int s = 0; s <= max_sum; ++s) q_.push_back(binom_mod_general(s - 1, p - 1, p_));
  }

  std::int64_t prime() const { return p_.value(); }

  std::int64_t operator()(int g, const std::vector<int>& sums) const {
    const std::int64_t p = p_.value();
    std::int64_t v = g_minus_one_[static_cast<std::size_t>(g)];
    if (v == 0) return 0;
    for (int c = 0; c < d_; ++c) {
      v = mul_mod(v, q_[static_cast<std::size_t>(sums[static_cast<std::size_t>(c)])], p);
      if (v == 0) return 0;
    }
    const std::int64_t cg = g_over_p_[static_cast<std::size_t>(g)];
    for (int i : factors_) v = mul_mod(v, mod_floor(cg - i, p), p);
    return v;
  }

private:
  PrimeModulus p_;
  std::vector<int> factors_;
  int d_;
  std::vector<std::int64_t> g_minus_one_, g_over_p_, q_;
};

}  // namespace detail

inline std::int64_t eval_poly_at_point(const DownsizedPolySpec& spec, const std::vector<std::int64_t>& x) {
  const auto positions = spec.J.positions();
  if (x.size() != positions.size())
    throw UsageError("point has " + std::to_string(x.size()) + " coordinates, expected " + std::to_string(positions.size()));
  const detail::ProductEvaluator eval(spec);
  const std::int64_t p = eval.prime();
  const int d = spec.J.dimension();
  int g = 0;
  std::vector<int> sums(static_cast<std::size_t>(d), 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::int64_t power = pow_mod(x[i], static_cast<std::uint64_t>(p - 1), p);  // 0 or 1
    g += static_cast<int>(power);
    for (int c = 0; c < d; ++c) sums[static_cast<std::size_t>(c)] += static_cast<int>(power) * positions[i].coords[static_cast<std::size_t>(c)];
  }
  return eval(g, sums);
}

inline std::int64_t eval_poly_at_point(const PolyFamilySpec& spec, const std::vector<std::int64_t>& x) {
  return eval_poly_at_point(spec.as_product(), x);
}

inline constexpr std::uint64_t kDefaultPointBudget = 100'000'000;

// Literal sum of the product over every point of Z_p^{|J|}. The first coordinate
// splits the point space into p independent work items.
inline std::int64_t polysum_direct_downsized(const DownsizedPolySpec& spec, std::uint64_t budget = kDefaultPointBudget,
                                             int jobs = 1) {
  const detail::ProductEvaluator eval(spec);
  const std::int64_t p = eval.prime();
  const auto positions = spec.J.positions();
  const std::size_t N = positions.size();
  const int d = spec.J.dimension();
  {
    BigInt points = 1;
    for (std::size_t i = 0; i < N; ++i) points *= p;
    if (points > budget)
      throw BudgetExceeded(std::to_string(p) + "^" + std::to_string(N) + " points exceed budget " + std::to_string(budget));
  }
  if (N == 0) return eval(0, std::vector<int>(static_cast<std::size_t>(d), 0));

  auto partial = parallel_map(static_cast<std::size_t>(p), jobs, [&](std::size_t first) {
    std::vector<std::int64_t> x(N, 0), power(N, 0);
    x[0] = static_cast<std::int64_t>(first);
    int g = 0;
    std::vector<int> sums(static_cast<std::size_t>(d), 0);
    auto set_power = [&](std::size_t i, std::int64_t value) {
      const std::int64_t pw = pow_mod(value, static_cast<std::uint64_t>(p - 1), p);
      if (pw != power[i]) {
        const int delta = static_cast<int>(pw - power[i]);
        g += delta;
        for (int c = 0; c < d; ++c) sums[static_cast<std::size_t>(c)] += delta * positions[i].coords[static_cast<std::size_t>(c)];
        power[i] = pw;
      }
    };
    set_power(0, x[0]);
    std::int64_t acc = 0;
    while (true) {
      acc += eval(g, sums);
      if (acc >= p) acc -= p;
      std::size_t i = 1;
      for (; i < N; ++i) {
        x[i] = x[i] + 1 == p ? 0 : x[i] + 1;
        set_power(i, x[i]);
        if (x[i] != 0) break;
      }
      if (i == N) break;
    }
    return acc;
  });
  std::int64_t total = 0;
  for (auto v : partial) total = (total + v) % p;
  return total;
}

// sum_j (p-1)^{jp} C_j prod_{i in T} (j - i) mod p, with counts[j] = N^{jp} mod p.
inline std::int64_t reduction_from_counts(std::int64_t p, const std::vector<std::int64_t>& counts,
                                          const std::vector<int>& factors) {
  std::int64_t total = 0;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    std::int64_t term = mul_mod(pow_mod(p - 1, j * static_cast<std::uint64_t>(p), p), mod_floor(counts[j], p), p);
    for (int i : factors) term = mul_mod(term, mod_floor(static_cast<std::int64_t>(j) - i, p), p);
    total = (total + term) % p;
  }
  return total;
}

// counts[j] = N^{jp}(J) mod p for j = 0..floor(|J|/p).
inline std::vector<std::int64_t> multiple_counts(const ZSequence& J) {
  const int p = J.modulus();
  const int top = J.length() / p;
  const auto res = zero_sum_residues(J, top * p);
  std::vector<std::int64_t> out;
  for (int j = 0; j <= top; ++j) out.push_back(res[static_cast<std::size_t>(j * p)]);
  return out;
}

inline std::int64_t polysum_reduction_downsized(const DownsizedPolySpec& spec) {
  const PrimeModulus p = detail::odd_prime_of(spec.J);
  detail::check_factors(spec);
  return reduction_from_counts(p.value(), multiple_counts(spec.J), spec.factors);
}

inline std::vector<int> pair_factors(int m, int n) {
  if (m == n || m < 1 || m > 8 || n < 1 || n > 8) throw UsageError("omitted pair must be two distinct indices in 1..8");
  std::vector<int> t;
  for (int i = 1; i <= 8; ++i)
    if (i != m && i != n) t.push_back(i);
  return t;
}

inline std::int64_t polysum_reduced(const ZSequence& J, int m, int n) {
  return polysum_reduction_downsized(PolyFamilySpec{J, m, n}.as_product());
}

// ---------------------------------------------------------------------------

struct PairValue {
  int m = 0, n = 0;
  std::int64_t value = 0;
};

struct Lemma3Report {
  std::int64_t p = 0;
  std::vector<std::int64_t> counts;  // N^{jp} mod p, j = 0..8
  std::vector<PairValue> pairs;      // all 28 omitted pairs
  bool all_equal = false;
  std::optional<std::int64_t> common;
  std::vector<PairValue> deviating;  // pairs disagreeing with the most common value
};

inline Lemma3Report lemma3_from_counts(std::int64_t p, const std::vector<std::int64_t>& counts) {
  Lemma3Report rep;
  rep.p = p;
  rep.counts = counts;
  std::map<std::int64_t, int> tally;
  for (int m = 1; m <= 8; ++m)
    for (int n = m + 1; n <= 8; ++n) {
      const std::int64_t v = reduction_from_counts(p, counts, pair_factors(m, n));
      rep.pairs.push_back({m, n, v});
      ++tally[v];
    }
  auto best = std::max_element(tally.begin(), tally.end(), [](auto& a, auto& b) { return a.second < b.second; });
  rep.all_equal = tally.size() == 1;
  if (rep.all_equal) rep.common = best->first;
  for (const auto& pv : rep.pairs)
    if (pv.value != best->first) rep.deviating.push_back(pv);
  return rep;
}

inline Lemma3Report lemma3_check(const ZSequence& J) {
  const PrimeModulus p = detail::odd_prime_of(J);
  if (J.length() != 9 * p.value() - 3) throw UsageError("sequence length must be 9p-3");
  return lemma3_from_counts(p.value(), multiple_counts(J));
}

struct Theorem3Report {
  std::int64_t p = 0;
  std::vector<std::int64_t> counts;  // N^{jp} mod p, j = 0..8
  bool p_zero_sum_exists = false;
  Lemma3Report lemma3;
  std::int64_t m = 0;                            // common sum (pair (1,8))
  std::map<int, std::int64_t> zero_point;        // j -> P_{1j}(0) mod p, j = 2..8
  std::map<int, std::int64_t> a, b;              // integer coefficients of N^p, N^{jp}
  bool equations_hold = false;                    // m - P_{1j}(0) == a_j N^p + b_j N^{jp}
  bool zero_points_distinct = false;
  std::vector<int> nonzero_indices;               // i in 2..8 with N^{ip} != 0 mod p
  std::string branch;  // "p-zero-sum", "six-nonzero", "inconsistent", "violated"
};

inline Theorem3Report theorem3_from_counts(std::int64_t p, const std::vector<std::int64_t>& counts, bool p_zero_sum_exists) {
  if (counts.size() != 9) throw UsageError("expected counts N^{jp} for j = 0..8");
  Theorem3Report rep;
  rep.p = p;
  rep.counts = counts;
  rep.p_zero_sum_exists = p_zero_sum_exists;
  rep.lemma3 = lemma3_from_counts(p, counts);
  rep.m = reduction_from_counts(p, counts, pair_factors(1, 8));
  rep.equations_hold = true;
  std::map<std::int64_t, int> seen;
  for (int j = 2; j <= 8; ++j) {
    const auto T = pair_factors(1, j);
    std::int64_t z = 1, a = (p % 2 == 1) ? -1 : 1, b = (p % 2 == 1 && j % 2 == 1) ? -1 : 1;
    for (int t : T) {
      z *= -t;
      a *= 1 - t;
      b *= j - t;
    }
    rep.zero_point[j] = mod_floor(z, p);
    rep.a[j] = a;
    rep.b[j] = b;
    ++seen[rep.zero_point[j]];
    const std::int64_t lhs = mod_floor(reduction_from_counts(p, counts, T) - rep.zero_point[j], p);
    const std::int64_t rhs = mod_floor(mod_floor(a, p) * counts[1] + mod_floor(b, p) * counts[static_cast<std::size_t>(j)], p);
    rep.equations_hold = rep.equations_hold && lhs == rhs;
    if (mod_floor(counts[static_cast<std::size_t>(j)], p) != 0) rep.nonzero_indices.push_back(j);
  }
  rep.zero_points_distinct = seen.size() == 7;
  if (p_zero_sum_exists) rep.branch = "p-zero-sum";
  else if (!rep.lemma3.all_equal) rep.branch = "inconsistent";
  else if (rep.nonzero_indices.size() >= 6) rep.branch = "six-nonzero";
  else rep.branch = "violated";
  return rep;
}

inline Theorem3Report theorem3_verdict(const ZSequence& J) {
  const PrimeModulus p = detail::odd_prime_of(J);
  if (p.value() <= 7) throw UsageError("theorem 3 verdict needs p > 7");
  if (J.length() != 9 * p.value() - 3) throw UsageError("sequence length must be 9p-3");
  return theorem3_from_counts(p.value(), multiple_counts(J), zero_sum_exists(J, static_cast<int>(p.value())));
}

}  // namespace zslab
