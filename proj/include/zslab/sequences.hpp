#pragma once

// Sequences over Z_n^d stored as multisets, with named constructions and
// deterministic random generators.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "zslab/arith.hpp"
#include "zslab/error.hpp"

namespace zslab {

struct GroupElement {
  std::vector<int> coords;

  GroupElement() = default;
  explicit GroupElement(std::vector<int> c) : coords(std::move(c)) {}
  GroupElement(std::initializer_list<int> c) : coords(c) {}

  int dimension() const noexcept { return static_cast<int>(coords.size()); }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

// Flattened index with coords[0] most significant, so index order is lexicographic order.
inline std::size_t flatten(const GroupElement& e, int n) {
  std::size_t idx = 0;
  for (int c : e.coords) idx = idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(c);
  return idx;
}

inline GroupElement unflatten(std::size_t idx, int n, int d) {
  std::vector<int> c(static_cast<std::size_t>(d));
  for (int i = d - 1; i >= 0; --i) {
    c[static_cast<std::size_t>(i)] = static_cast<int>(idx % static_cast<std::size_t>(n));
    idx /= static_cast<std::size_t>(n);
  }
  return GroupElement(std::move(c));
}

inline std::size_t group_order(int n, int d) {
  std::size_t g = 1;
  for (int i = 0; i < d; ++i) g *= static_cast<std::size_t>(n);
  return g;
}

class ZSequence {
public:
  using Multiset = std::map<GroupElement, int>;

  ZSequence(int n, int d) : n_(n), d_(d) {
    if (n < 2) throw UsageError("modulus n must be at least 2");
    if (d < 1) throw UsageError("dimension d must be at least 1");
  }

  int modulus() const noexcept { return n_; }
  int dimension() const noexcept { return d_; }
  int length() const noexcept { return length_; }
  bool empty() const noexcept { return length_ == 0; }
  std::size_t distinct() const noexcept { return mult_.size(); }
  const Multiset& multiset() const noexcept { return mult_; }

  int multiplicity(const GroupElement& e) const {
    auto it = mult_.find(e);
    return it == mult_.end() ? 0 : it->second;
  }

  void add(const GroupElement& e, int count = 1) {
    check(e);
    if (count < 0) throw UsageError("negative multiplicity");
    if (count == 0) return;
    mult_[e] += count;
    length_ += count;
  }

  // Elements with repetition, in lexicographic order.
  std::vector<GroupElement> positions() const {
    std::vector<GroupElement> out;
    out.reserve(static_cast<std::size_t>(length_));
    for (const auto& [e, m] : mult_)
      for (int i = 0; i < m; ++i) out.push_back(e);
    return out;
  }

  GroupElement total_sum() const {
    std::vector<long long> acc(static_cast<std::size_t>(d_), 0);
    for (const auto& [e, m] : mult_)
      for (int i = 0; i < d_; ++i) acc[static_cast<std::size_t>(i)] += static_cast<long long>(e.coords[i]) * m;
    GroupElement s;
    for (auto v : acc) s.coords.push_back(static_cast<int>(v % n_));
    return s;
  }

  GroupElement zero() const { return GroupElement(std::vector<int>(static_cast<std::size_t>(d_), 0)); }

  void check(const GroupElement& e) const {
    if (e.dimension() != d_)
      throw UsageError("element has dimension " + std::to_string(e.dimension()) + ", expected " +
                       std::to_string(d_));
    for (int c : e.coords)
      if (c < 0 || c >= n_)
        throw UsageError("coordinate out of range: " + std::to_string(c) + " not in [0," +
                         std::to_string(n_) + ")");
  }

  friend bool operator==(const ZSequence&, const ZSequence&) = default;

private:
  int n_;
  int d_;
  Multiset mult_;
  int length_ = 0;
};

inline ZSequence sequence_from_elements(int n, int d, const std::vector<GroupElement>& elements) {
  ZSequence s(n, d);
  for (const auto& e : elements) s.add(e);
  return s;
}

// {(0,0,0)^{p-1}, (1,0,0)^{p-1}, (0,1,0)^{p-1}, (0,0,1)^{p-1}, (1,1,1)^{(p-1)/2}} over Z_p^3.
inline ZSequence theorem2_construction(const PrimeModulus& prime) {
  const int p = static_cast<int>(prime.value());
  if (p == 2) throw UsageError("construction needs an odd prime");
  ZSequence s(p, 3);
  s.add({0, 0, 0}, p - 1);
  s.add({1, 0, 0}, p - 1);
  s.add({0, 1, 0}, p - 1);
  s.add({0, 0, 1}, p - 1);
  s.add({1, 1, 1}, (p - 1) / 2);
  return s;
}

// Every 0/1 vector of Z_n^d with multiplicity n-1: length 2^d (n-1), no n-term zero-sum.
inline ZSequence cube_construction(int n, int d) {
  ZSequence s(n, d);
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    GroupElement e;
    for (int i = d - 1; i >= 0; --i) e.coords.push_back(static_cast<int>((mask >> i) & 1));
    s.add(e, n - 1);
  }
  return s;
}

inline ZSequence known_extremal(const std::string& family, int n) {
  if (family == "egz-d1") return cube_construction(n, 1);
  if (family == "kemnitz-d2") return cube_construction(n, 2);
  throw UsageError("unknown extremal family '" + family + "'");
}

struct GeneratorProfile {
  enum class Kind { uniform, low_support };
  Kind kind = Kind::uniform;
  int support = 0;

  static GeneratorProfile uniform() { return {}; }
  static GeneratorProfile low_support(int s) {
    if (s < 1) throw UsageError("low-support profile needs s >= 1");
    return {Kind::low_support, s};
  }

  std::string to_string() const {
    return kind == Kind::uniform ? "uniform" : "low-support:" + std::to_string(support);
  }

  static GeneratorProfile parse(const std::string& text) {
    if (text == "uniform") return uniform();
    for (const std::string prefix : {"low-support:", "low-support(", "low-support="}) {
      if (text.rfind(prefix, 0) == 0) {
        std::string rest = text.substr(prefix.size());
        if (!rest.empty() && rest.back() == ')') rest.pop_back();
        try {
          return low_support(std::stoi(rest));
        } catch (const std::logic_error&) {
          break;
        }
      }
    }
    throw UsageError("unknown generator profile '" + text + "'");
  }

  friend bool operator==(const GeneratorProfile&, const GeneratorProfile&) = default;
};

// splitmix64 finalizer; used to derive independent per-trial seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix_seed(master ^ mix_seed(index + 0x632be59bd9b4e019ULL));
}

inline ZSequence random_sequence(int n, int d, int length, const GeneratorProfile& profile,
                                 std::uint64_t seed) {
  if (length < 0) throw UsageError("negative sequence length");
  ZSequence s(n, d);
  std::mt19937_64 rng(seed);
  const std::size_t order = group_order(n, d);
  std::uniform_int_distribution<std::size_t> pick(0, order - 1);

  if (profile.kind == GeneratorProfile::Kind::uniform) {
    for (int i = 0; i < length; ++i) s.add(unflatten(pick(rng), n, d));
    return s;
  }

  std::vector<std::size_t> support;
  const std::size_t want = std::min<std::size_t>(static_cast<std::size_t>(profile.support), order);
  while (support.size() < want) {
    const std::size_t idx = pick(rng);
    if (std::find(support.begin(), support.end(), idx) == support.end()) support.push_back(idx);
  }
  std::uniform_int_distribution<std::size_t> slot(0, support.size() - 1);
  for (int i = 0; i < length; ++i) s.add(unflatten(support[slot(rng)], n, d));
  return s;
}

// Trial generator shared by verification campaigns: even trial indices draw
// uniformly, odd ones from a low-support profile with s in [1, 2(d+1)].
inline ZSequence campaign_sequence(int p, int d, int length, std::uint64_t seed, std::size_t trial) {
  const std::uint64_t s = derive_seed(seed, trial);
  if (trial % 2 == 0) return random_sequence(p, d, length, GeneratorProfile::uniform(), s);
  const int support = 1 + static_cast<int>(mix_seed(s) % static_cast<std::uint64_t>(2 * (d + 1)));
  return random_sequence(p, d, length, GeneratorProfile::low_support(support), s);
}

// Visit each sub-multiset of the given size exactly once. The visitor receives one
// count per distinct element of J (in J's lexicographic order) and the weight
// prod C(mult_J(e), count(e)), i.e. the number of index subsets it stands for.
template <class Visitor>
void for_each_sub_multiset(const ZSequence& J, int size, Visitor&& visit) {
  if (size < 0 || size > J.length())
    throw UsageError("sub-multiset size " + std::to_string(size) + " out of range [0," +
                     std::to_string(J.length()) + "]");
  std::vector<int> mult;
  for (const auto& [e, m] : J.multiset()) mult.push_back(m);
  const std::size_t k = mult.size();
  std::vector<int> suffix(k + 1, 0);
  for (std::size_t i = k; i-- > 0;) suffix[i] = suffix[i + 1] + mult[i];

  std::vector<int> counts(k, 0);
  std::function<bool(std::size_t, int, const BigInt&)> rec = [&](std::size_t i, int left,
                                                                 const BigInt& weight) -> bool {
    if (i == k) {
      if (left == 0) {
        if constexpr (std::is_same_v<std::invoke_result_t<Visitor, const std::vector<int>&, const BigInt&>, bool>)
          return visit(static_cast<const std::vector<int>&>(counts), weight);
        else
          visit(static_cast<const std::vector<int>&>(counts), weight);
      }
      return true;
    }
    const int lo = std::max(0, left - suffix[i + 1]);
    const int hi = std::min(mult[i], left);
    for (int c = lo; c <= hi; ++c) {
      counts[i] = c;
      if (!rec(i + 1, left - c, weight * binom_exact(mult[i], c))) return false;
    }
    counts[i] = 0;
    return true;
  };
  rec(0, size, BigInt(1));
}

inline ZSequence materialize(const ZSequence& J, const std::vector<int>& counts) {
  ZSequence s(J.modulus(), J.dimension());
  std::size_t i = 0;
  for (const auto& [e, m] : J.multiset()) s.add(e, counts[i++]);
  return s;
}

inline std::vector<ZSequence> sub_multisets(const ZSequence& J, int size) {
  std::vector<ZSequence> out;
  for_each_sub_multiset(J, size, [&](const std::vector<int>& counts, const BigInt&) {
    out.push_back(materialize(J, counts));
  });
  return out;
}

}  // namespace zslab
