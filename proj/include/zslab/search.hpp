#pragma once

// Zero-sum constants by exhaustive multiset search, and randomized falsification
// campaigns for the statements about sequences of size kp - 3.

#include <algorithm>
#include <atomic>
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

inline bool has_zero_sum(const ZSequence& J, int length) { return zero_sum_exists(J, length); }

struct SearchOptions {
  std::uint64_t node_budget = 2'000'000'000ULL;
  bool permute_coordinates = true;  // root element restricted to sorted coordinates
  bool translate_to_zero = true;    // root element restricted to 0
  int jobs = 1;
};

struct ZeroSumConstantResult {
  int n = 0, d = 0, k = 0;
  bool complete = false;
  std::optional<int> value;
  int lower = 0;  // value >= lower
  int upper = 0;  // value <= upper
  std::optional<ZSequence> witness;
  // Certificate: zero-sum-free multisets visited per size (after symmetry
  // reduction) and, per size, how many one-element extensions were forced.
  std::vector<std::uint64_t> free_counts;
  std::vector<std::uint64_t> forced_counts;
  std::uint64_t nodes = 0;
  bool monotone = true;
  int construction_lower = 0;  // from the cube construction, when k == 1
};

// Any multiset of size n^d (kn - 1) + 1 repeats an element kn times.
inline int pigeonhole_bound(int n, int d, int k) {
  return static_cast<int>(group_order(n, d)) * (k * n - 1) + 1;
}

namespace detail {

struct SearchContext {
  int n, d, target;  // target = kn
  std::size_t G;
  int max_size;
  std::vector<std::vector<std::uint32_t>> plus;  // plus[e][s] = s + e
  std::atomic<std::uint64_t>* nodes;
  std::uint64_t budget;
};

struct SubtreeResult {
  std::vector<std::uint64_t> free_counts;
  std::vector<std::uint64_t> forced_counts;
  int best = -1;
  std::vector<std::size_t> best_path;
  bool exhausted_budget = false;
  bool hit_depth_limit = false;
};

// reach[c * G + s]: some c-element sub-multiset sums to s; only c <= target kept.
inline bool extend(const SearchContext& cx, const std::vector<char>& from, std::size_t e, std::vector<char>& to) {
  to = from;
  const auto& add = cx.plus[e];
  for (int c = cx.target - 1; c >= 0; --c) {
    const char* src = &from[static_cast<std::size_t>(c) * cx.G];
    char* dst = &to[static_cast<std::size_t>(c + 1) * cx.G];
    for (std::size_t s = 0; s < cx.G; ++s)
      if (src[s]) dst[add[s]] = 1;
  }
  return to[static_cast<std::size_t>(cx.target) * cx.G] != 0;
}

inline void dfs(const SearchContext& cx, std::vector<std::vector<char>>& stack, std::vector<std::size_t>& path,
                SubtreeResult& out) {
  const int size = static_cast<int>(path.size());
  ++out.free_counts[static_cast<std::size_t>(size)];
  if (size > out.best) {
    out.best = size;
    out.best_path = path;
  }
  if (size >= cx.max_size) {
    out.hit_depth_limit = true;
    return;
  }
  if (stack.size() <= static_cast<std::size_t>(size + 1)) stack.emplace_back();
  for (std::size_t e = path.back(); e < cx.G; ++e) {
    if (cx.nodes->fetch_add(1, std::memory_order_relaxed) >= cx.budget) {
      out.exhausted_budget = true;
      return;
    }
    if (extend(cx, stack[static_cast<std::size_t>(size)], e, stack[static_cast<std::size_t>(size + 1)])) {
      ++out.forced_counts[static_cast<std::size_t>(size + 1)];
      continue;
    }
    path.push_back(e);
    dfs(cx, stack, path, out);
    path.pop_back();
    if (out.exhausted_budget) return;
  }
}

}  // namespace detail

// s_k(Z_n^d): the least t such that every multiset of size t has a kn-term
// zero-sum. Multisets are grown in nondecreasing flattened order, and a branch
// is cut as soon as the reachability table shows a kn-term zero-sum.
inline ZeroSumConstantResult s_constant(int n, int d, int k, const SearchOptions& opts = {}) {
  if (n < 2 || d < 1 || k < 1) throw UsageError("s_constant needs n >= 2, d >= 1, k >= 1");
  const std::size_t G = group_order(n, d);
  if (G > 4096) throw UsageError("group of order " + std::to_string(G) + " is beyond exhaustive search");

  ZeroSumConstantResult res;
  res.n = n;
  res.d = d;
  res.k = k;
  const int bound = pigeonhole_bound(n, d, k);

  std::atomic<std::uint64_t> nodes{0};
  detail::SearchContext cx{n, d, k * n, G, bound, {}, &nodes, opts.node_budget};
  cx.plus.resize(G);
  for (std::size_t e = 0; e < G; ++e) {
    const GroupElement a = unflatten(e, n, d);
    cx.plus[e].resize(G);
    for (std::size_t s = 0; s < G; ++s) {
      GroupElement b = unflatten(s, n, d);
      for (int i = 0; i < d; ++i) b.coords[static_cast<std::size_t>(i)] = (b.coords[static_cast<std::size_t>(i)] + a.coords[static_cast<std::size_t>(i)]) % n;
      cx.plus[e][s] = static_cast<std::uint32_t>(flatten(b, n));
    }
  }

  // Up to translation every multiset contains 0 as its least element, and up
  // to a coordinate permutation its least element has sorted coordinates.
  std::vector<std::size_t> roots;
  for (std::size_t e = 0; e < G; ++e) {
    if (opts.translate_to_zero && e != 0) continue;
    const GroupElement g = unflatten(e, n, d);
    if (opts.permute_coordinates && !std::is_sorted(g.coords.begin(), g.coords.end())) continue;
    roots.push_back(e);
  }

  const std::size_t T = static_cast<std::size_t>(cx.target);
  auto subtrees = parallel_map(roots.size(), opts.jobs, [&](std::size_t i) {
    detail::SubtreeResult out;
    out.free_counts.assign(static_cast<std::size_t>(bound) + 1, 0);
    out.forced_counts.assign(static_cast<std::size_t>(bound) + 2, 0);
    std::vector<std::vector<char>> stack(2);
    stack[0].assign((T + 1) * G, 0);
    stack[0][0] = 1;
    nodes.fetch_add(1, std::memory_order_relaxed);
    if (detail::extend(cx, stack[0], roots[i], stack[1])) {
      ++out.forced_counts[1];
      return out;
    }
    std::vector<std::size_t> path{roots[i]};
    detail::dfs(cx, stack, path, out);
    return out;
  });

  res.free_counts.assign(static_cast<std::size_t>(bound) + 1, 0);
  res.forced_counts.assign(static_cast<std::size_t>(bound) + 2, 0);
  res.free_counts[0] = 1;
  int best = 0;
  std::vector<std::size_t> best_path;
  bool exhausted = false, depth_limited = false;
  for (const auto& s : subtrees) {
    for (std::size_t t = 0; t < s.free_counts.size(); ++t) res.free_counts[t] += s.free_counts[t];
    for (std::size_t t = 0; t < s.forced_counts.size(); ++t) res.forced_counts[t] += s.forced_counts[t];
    if (s.best > best) {
      best = s.best;
      best_path = s.best_path;
    }
    exhausted = exhausted || s.exhausted_budget;
    depth_limited = depth_limited || s.hit_depth_limit;
  }
  res.nodes = nodes.load();

  ZSequence w(n, d);
  for (auto e : best_path) w.add(unflatten(e, n, d));
  res.witness = w;

  // Sizes with a zero-sum-free member must form an initial segment.
  bool seen_empty = false;
  for (std::size_t t = 0; t < res.free_counts.size(); ++t) {
    if (res.free_counts[t] == 0) seen_empty = true;
    else if (seen_empty) res.monotone = false;
  }

  if (k == 1) {
    res.construction_lower = static_cast<int>(std::size_t{1} << std::min(d, 20)) * (n - 1) + 1;
  }
  res.lower = std::max(best + 1, res.construction_lower);
  if (exhausted || depth_limited) {
    res.complete = false;
    res.upper = bound;
    if (depth_limited) res.monotone = false;  // a zero-sum-free multiset at the pigeonhole bound
  } else {
    res.complete = true;
    res.value = best + 1;
    res.upper = best + 1;
    if (res.construction_lower > best + 1) res.monotone = false;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Statement campaigns

struct StatementInfo {
  std::string id;
  int size_q = 0;        // sequences have size size_q * p - 3
  int conclusion_q = 0;  // claimed zero-sum length conclusion_q * p
  bool conditional = false;
};

inline std::vector<StatementInfo> statement_catalog() {
  return {{"lemma1", 6, 2, false},       {"lemma2", 7, 3, false},
          {"corollary-4p", 8, 4, false}, {"corollary-5p", 9, 5, false},
          {"application1", 9, 6, true},  {"theorem1-hypothesis", 7, 1, true},
          {"theorem2", 4, 1, false}};
}

inline StatementInfo statement_info(const std::string& id) {
  for (const auto& s : statement_catalog())
    if (s.id == id) return s;
  throw UsageError("unknown statement '" + id + "'");
}

struct CampaignOptions {
  int jobs = 1;
  int max_witnesses = 5;
  std::uint64_t sub_multiset_budget = 200'000;  // per trial, for the constancy hypothesis
};

struct CampaignReport {
  std::string statement;
  std::int64_t p = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  int length = 0;
  int hypothesis_realized = 0;
  int undetermined = 0;  // hypothesis check refused by budget
  int counterexample_count = 0;
  std::vector<ZSequence> counterexamples;
  std::string status;  // pass, fail, vacuous
  std::string note;
  std::vector<std::pair<std::string, std::string>> stats;

  bool pass() const noexcept { return counterexample_count == 0; }
};

// Number of distinct sub-multisets of the given size.
inline BigInt distinct_sub_multiset_count(const ZSequence& J, int size) {
  std::vector<BigInt> poly(static_cast<std::size_t>(size) + 1, 0);
  poly[0] = 1;
  for (const auto& [e, m] : J.multiset()) {
    std::vector<BigInt> next(poly.size(), 0);
    for (std::size_t a = 0; a < poly.size(); ++a) {
      if (poly[a] == 0) continue;
      for (int j = 0; j <= m && a + static_cast<std::size_t>(j) < poly.size(); ++j) next[a + static_cast<std::size_t>(j)] += poly[a];
    }
    poly = std::move(next);
  }
  return poly[static_cast<std::size_t>(size)];
}

// Do all size-(4p-3) sub-multisets share one N^{2p} residue? nullopt when the
// number of distinct sub-multisets exceeds the budget.
inline std::optional<bool> constant_2p_residue(const ZSequence& J, std::int64_t p, std::uint64_t budget) {
  const int small = static_cast<int>(4 * p - 3);
  if (distinct_sub_multiset_count(J, small) > budget) return std::nullopt;
  const int len = static_cast<int>(2 * p);
  std::optional<std::int64_t> common;
  bool constant = true;
  for_each_sub_multiset(J, small, [&](const std::vector<int>& counts, const BigInt&) {
    const ZSequence I = materialize(J, counts);
    const std::int64_t r = count_zero_sum(I, len, CountMode::mod).residue(p);
    if (!common) common = r;
    else if (*common != r) constant = false;
    return constant;
  });
  return constant;
}

inline CampaignReport verify_theorem2(std::int64_t p) {
  const PrimeModulus prime(p);
  const ZSequence J = theorem2_construction(prime);
  const int P = static_cast<int>(p);
  CampaignReport rep;
  rep.statement = "theorem2";
  rep.p = p;
  rep.trials = 1;
  rep.length = J.length();
  rep.hypothesis_realized = 1;

  const int expected = 4 * P - 4 + (P - 1) / 2;
  const bool length_ok = J.length() == expected;
  const bool no_p = !has_zero_sum(J, P);
  const bool no_2p = J.length() < 2 * P || !has_zero_sum(J, 2 * P);

  const int small = 4 * P - 3;
  std::uint64_t distinct = 0, nonzero = 0;
  BigInt weighted = 0;
  if (small <= J.length()) {
    for_each_sub_multiset(J, small, [&](const std::vector<int>& counts, const BigInt& weight) {
      ++distinct;
      weighted += weight;
      if (count_zero_sum(materialize(J, counts), 2 * P, CountMode::exact).value != 0) ++nonzero;
    });
  }
  if (!(length_ok && no_p && no_2p && nonzero == 0)) {
    rep.counterexample_count = 1;
    rep.counterexamples.push_back(J);
  }
  rep.status = rep.pass() ? "pass" : "fail";
  rep.stats = {{"expected_length", std::to_string(expected)},
               {"length_ok", length_ok ? "true" : "false"},
               {"p_zero_sum", no_p ? "false" : "true"},
               {"2p_zero_sum", no_2p ? "false" : "true"},
               {"sub_multisets_distinct", std::to_string(distinct)},
               {"sub_multisets_weighted", weighted.str()},
               {"sub_multisets_with_2p_zero_sum", std::to_string(nonzero)}};
  return rep;
}

inline CampaignReport verify_statement(const std::string& id, std::int64_t p, int trials, std::uint64_t seed,
                                       const CampaignOptions& opts = {}) {
  const StatementInfo info = statement_info(id);
  const PrimeModulus prime(p);
  if (trials < 0) throw UsageError("trials must be non-negative");
  if (id == "theorem2") {
    CampaignReport r = verify_theorem2(p);
    r.seed = seed;
    return r;
  }
  const int P = static_cast<int>(p);
  const int length = info.size_q * P - 3;
  const int conclusion = info.conclusion_q * P;

  enum class Outcome { not_realized, undetermined, holds, fails };
  struct Trial {
    Outcome outcome = Outcome::not_realized;
    std::optional<ZSequence> sequence;
  };
  auto results = parallel_map(static_cast<std::size_t>(trials), opts.jobs, [&](std::size_t t) {
    ZSequence J = campaign_sequence(P, 3, length, seed, t);
    Trial r;
    if (id == "application1") {
      if (has_zero_sum(J, P)) return r;
    } else if (id == "theorem1-hypothesis") {
      const auto constant = constant_2p_residue(J, p, opts.sub_multiset_budget);
      if (!constant) {
        r.outcome = Outcome::undetermined;
        return r;
      }
      if (!*constant) return r;
    }
    r.outcome = has_zero_sum(J, conclusion) ? Outcome::holds : Outcome::fails;
    if (r.outcome == Outcome::fails) r.sequence = std::move(J);
    return r;
  });

  CampaignReport rep;
  rep.statement = id;
  rep.p = p;
  rep.trials = trials;
  rep.seed = seed;
  rep.length = length;
  for (const auto& r : results) {
    if (r.outcome == Outcome::undetermined) ++rep.undetermined;
    if (r.outcome == Outcome::holds || r.outcome == Outcome::fails) ++rep.hypothesis_realized;
    if (r.outcome == Outcome::fails) {
      ++rep.counterexample_count;
      if (static_cast<int>(rep.counterexamples.size()) < opts.max_witnesses) rep.counterexamples.push_back(*r.sequence);
    }
  }
  if (!rep.pass()) {
    rep.status = "fail";
  } else if (rep.hypothesis_realized == 0) {
    rep.status = "vacuous";
    rep.note = info.conditional ? "hypothesis never realized; vacuously consistent" : "no trials";
  } else {
    rep.status = "pass";
    if (info.conditional && rep.hypothesis_realized < trials)
      rep.note = "hypothesis realized in " + std::to_string(rep.hypothesis_realized) + " of " +
                 std::to_string(trials) + " trials";
  }
  rep.stats = {{"conclusion_length", std::to_string(conclusion)}};
  return rep;
}

}  // namespace zslab
