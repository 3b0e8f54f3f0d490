#pragma once

// N^l(J): number of index subsets of J of size l whose sum is a given target.

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "zslab/arith.hpp"
#include "zslab/error.hpp"
#include "zslab/sequences.hpp"

namespace zslab {

enum class CountMode { exact, mod };

inline std::string to_string(CountMode m) { return m == CountMode::exact ? "exact" : "mod"; }

inline CountMode parse_count_mode(const std::string& s) {
  if (s == "exact") return CountMode::exact;
  if (s == "mod") return CountMode::mod;
  throw UsageError("unknown count mode '" + s + "'");
}

// Exact count, or a residue in [0, modulus) in mod mode.
struct Count {
  CountMode mode = CountMode::exact;
  std::int64_t modulus = 0;
  BigInt value = 0;

  std::int64_t residue(std::int64_t m) const { return mod_floor(value, m); }

  friend bool operator==(const Count&, const Count&) = default;
};

struct CountVector {
  std::vector<std::pair<int, Count>> entries;  // strictly increasing lengths

  const Count& at(int length) const {
    for (const auto& [l, c] : entries)
      if (l == length) return c;
    throw UsageError("length " + std::to_string(length) + " not in count vector");
  }
};

namespace detail {

struct ModRing {
  using value_type = std::uint32_t;
  std::uint32_t m;

  value_type reduce(const BigInt& v) const { return static_cast<value_type>(mod_floor(v, m)); }
  void fma(value_type& acc, value_type a, value_type w) const {
    acc = static_cast<value_type>((acc + static_cast<std::uint64_t>(a) * w) % m);
  }
  bool is_zero(value_type v) const { return v == 0; }
  BigInt to_big(value_type v) const { return BigInt(v); }
};

struct ExactRing {
  using value_type = BigInt;

  value_type reduce(const BigInt& v) const { return v; }
  void fma(value_type& acc, const value_type& a, const value_type& w) const { acc += a * w; }
  bool is_zero(const value_type& v) const { return v == 0; }
  BigInt to_big(const value_type& v) const { return v; }
};

// table[c * G + s] = number of index subsets of size c with flattened sum s.
template <class Ring>
std::vector<typename Ring::value_type> subset_sum_table(const ZSequence& J, int max_length, const Ring& ring) {
  using V = typename Ring::value_type;
  const int n = J.modulus(), d = J.dimension();
  const std::size_t G = group_order(n, d);
  const std::size_t L = static_cast<std::size_t>(max_length);
  std::vector<V> table((L + 1) * G, V(0));
  table[0] = V(1);
  int reached = 0;  // largest c with a nonzero row

  for (const auto& [e, m] : J.multiset()) {
    const int jmax = std::min(m, max_length);
    // w[j] = C(m, j) in the ring.
    std::vector<V> w(static_cast<std::size_t>(jmax) + 1);
    for (int j = 0; j <= jmax; ++j) w[static_cast<std::size_t>(j)] = ring.reduce(binom_exact(m, j));

    std::vector<std::vector<std::size_t>> perms(static_cast<std::size_t>(jmax) + 1);
    for (int j = 1; j <= jmax; ++j) {
      auto& perm = perms[static_cast<std::size_t>(j)];
      perm.resize(G);
      for (std::size_t s = 0; s < G; ++s) {
        std::size_t idx = s, out = 0, place = 1;
        for (int i = d - 1; i >= 0; --i) {
          const std::size_t c = idx % static_cast<std::size_t>(n);
          idx /= static_cast<std::size_t>(n);
          const std::size_t t = (c + static_cast<std::size_t>(j) * static_cast<std::size_t>(e.coords[i])) %
                                static_cast<std::size_t>(n);
          out += t * place;
          place *= static_cast<std::size_t>(n);
        }
        perm[s] = out;
      }
    }

    // Chosen-count descending so each source row is read before it is updated.
    for (int c = std::min(reached, max_length); c >= 0; --c) {
      const V* src = &table[static_cast<std::size_t>(c) * G];
      for (int j = 1; j <= jmax && c + j <= max_length; ++j) {
        V* dst = &table[static_cast<std::size_t>(c + j) * G];
        const V& wj = w[static_cast<std::size_t>(j)];
        if (ring.is_zero(wj)) continue;
        const auto& perm = perms[static_cast<std::size_t>(j)];
        for (std::size_t s = 0; s < G; ++s) {
          if (ring.is_zero(src[s])) continue;
          ring.fma(dst[perm[s]], src[s], wj);
        }
      }
    }
    reached = std::min(reached + m, max_length);
  }
  return table;
}

inline int max_requested(const ZSequence& J, const std::vector<int>& lengths) {
  int L = 0;
  for (int l : lengths) {
    if (l < 0 || l > J.length())
      throw UsageError("length " + std::to_string(l) + " out of range [0," + std::to_string(J.length()) + "]");
    L = std::max(L, l);
  }
  return L;
}

}  // namespace detail

inline Count count_subsequences(const ZSequence& J, int length, const GroupElement& target,
                                CountMode mode = CountMode::exact) {
  J.check(target);
  const int L = detail::max_requested(J, {length});
  const std::size_t G = group_order(J.modulus(), J.dimension());
  const std::size_t idx = static_cast<std::size_t>(length) * G + flatten(target, J.modulus());
  if (mode == CountMode::exact) {
    auto t = detail::subset_sum_table(J, L, detail::ExactRing{});
    return {mode, 0, t[idx]};
  }
  detail::ModRing ring{static_cast<std::uint32_t>(J.modulus())};
  auto t = detail::subset_sum_table(J, L, ring);
  return {mode, J.modulus(), BigInt(t[idx])};
}

inline Count count_zero_sum(const ZSequence& J, int length, CountMode mode = CountMode::exact) {
  return count_subsequences(J, length, J.zero(), mode);
}

// Zero-target counts for several lengths from one DP pass.
inline CountVector count_profile(const ZSequence& J, std::vector<int> lengths, CountMode mode = CountMode::mod) {
  std::sort(lengths.begin(), lengths.end());
  lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
  const int L = lengths.empty() ? 0 : detail::max_requested(J, lengths);
  const std::size_t G = group_order(J.modulus(), J.dimension());
  CountVector out;
  if (mode == CountMode::exact) {
    auto t = detail::subset_sum_table(J, L, detail::ExactRing{});
    for (int l : lengths) out.entries.push_back({l, Count{mode, 0, t[static_cast<std::size_t>(l) * G]}});
  } else {
    detail::ModRing ring{static_cast<std::uint32_t>(J.modulus())};
    auto t = detail::subset_sum_table(J, L, ring);
    for (int l : lengths)
      out.entries.push_back({l, Count{mode, J.modulus(), BigInt(t[static_cast<std::size_t>(l) * G])}});
  }
  return out;
}

// Residues N^l(J) mod J.modulus() for all l = 0..max_length in one pass.
inline std::vector<std::int64_t> zero_sum_residues(const ZSequence& J, int max_length) {
  max_length = std::min(max_length, J.length());
  detail::ModRing ring{static_cast<std::uint32_t>(J.modulus())};
  auto t = detail::subset_sum_table(J, max_length, ring);
  const std::size_t G = group_order(J.modulus(), J.dimension());
  std::vector<std::int64_t> out;
  for (int l = 0; l <= max_length; ++l) out.push_back(t[static_cast<std::size_t>(l) * G]);
  return out;
}

// True iff some index subset of the given size sums to zero. Boolean
// reachability DP; stops as soon as the target state is reached.
inline bool zero_sum_exists(const ZSequence& J, int length) {
  if (length < 0 || length > J.length()) throw UsageError("length out of range");
  const int n = J.modulus();
  const std::size_t G = group_order(n, J.dimension());
  const std::size_t L = static_cast<std::size_t>(length);
  std::vector<char> reach((L + 1) * G, 0);
  reach[0] = 1;
  if (length == 0) return true;
  int reached = 0;
  for (const auto& [e, m] : J.multiset()) {
    std::vector<std::size_t> plus(G);
    for (std::size_t s = 0; s < G; ++s) {
      const GroupElement a = unflatten(s, n, J.dimension());
      GroupElement b = a;
      for (std::size_t c = 0; c < b.coords.size(); ++c) b.coords[c] = (a.coords[c] + e.coords[c]) % n;
      plus[s] = flatten(b, n);
    }
    for (int copy = 0; copy < m; ++copy) {
      for (int c = std::min(reached, length - 1); c >= 0; --c) {
        const char* src = &reach[static_cast<std::size_t>(c) * G];
        char* dst = &reach[static_cast<std::size_t>(c + 1) * G];
        for (std::size_t s = 0; s < G; ++s)
          if (src[s]) dst[plus[s]] = 1;
      }
      reached = std::min(reached + 1, length);
      if (reach[L * G]) return true;
    }
  }
  return reach[L * G] != 0;
}

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

// Independent oracle: sums over explicit sub-multisets, weighted by prod C(m_e, k_e).
inline Count brute_force_count(const ZSequence& J, int length, const GroupElement& target,
                               std::uint64_t budget = kDefaultEnumerationBudget) {
  J.check(target);
  if (length < 0 || length > J.length()) throw UsageError("length out of range");
  if (binom_exact(J.length(), length) > budget)
    throw BudgetExceeded("C(" + std::to_string(J.length()) + "," + std::to_string(length) +
                         ") exceeds enumeration budget " + std::to_string(budget));
  std::vector<GroupElement> distinct;
  for (const auto& [e, m] : J.multiset()) distinct.push_back(e);
  const int n = J.modulus(), d = J.dimension();
  BigInt total = 0;
  for_each_sub_multiset(J, length, [&](const std::vector<int>& counts, const BigInt& weight) {
    for (int k = 0; k < d; ++k) {
      long long s = 0;
      for (std::size_t i = 0; i < counts.size(); ++i) s += static_cast<long long>(counts[i]) * distinct[i].coords[k];
      if (s % n != target.coords[static_cast<std::size_t>(k)]) return;
    }
    total += weight;
  });
  return {CountMode::exact, 0, total};
}

}  // namespace zslab
