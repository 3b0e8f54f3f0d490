#pragma once

// Counting identities c0 + sum_i c_i N^{l_i}(J) == 0 (mod p) over sequences of a
// fixed symbolic size, the lifting transform between sizes, empirical
// falsification, and forward-substitution over systems of such identities.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zslab/affine.hpp"
#include "zslab/arith.hpp"
#include "zslab/counting.hpp"
#include "zslab/error.hpp"
#include "zslab/parallel.hpp"
#include "zslab/sequences.hpp"

namespace zslab {

struct IdentityTerm {
  SymbolicLength length;
  std::int64_t coefficient = 0;

  friend bool operator==(const IdentityTerm&, const IdentityTerm&) = default;
};

// An identity instantiated at a concrete prime.
struct ConcreteIdentity {
  std::string name;
  std::int64_t p = 0;
  int domain_size = 0;
  std::int64_t constant = 0;
  std::vector<std::pair<int, std::int64_t>> terms;  // (length, coefficient), increasing length

  // Residue of the identity for a sequence whose zero-sum counts mod p are
  // residues[l] (l = 0..max length).
  std::int64_t evaluate(const std::vector<std::int64_t>& residues) const {
    std::int64_t acc = mod_floor(constant, p);
    for (const auto& [l, c] : terms) {
      const std::int64_t v = static_cast<std::size_t>(l) < residues.size() ? residues[static_cast<std::size_t>(l)] : 0;
      acc = mod_floor(acc + mul_mod(mod_floor(c, p), v, p), p);
    }
    return acc;
  }
};

struct CountIdentity {
  std::string name;
  SymbolicLength domain;
  std::int64_t constant = 0;
  std::vector<IdentityTerm> terms;
  int d = 3;
  bool prime_only = true;
  std::int64_t p_min = 3;

  void validate() const {
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (terms[i].coefficient == 0) throw UsageError("identity term with zero coefficient");
      if (terms[i].length > domain) throw UsageError("identity term longer than its domain");
      if (i > 0 && !(terms[i - 1].length < terms[i].length))
        throw UsageError("identity term lengths must be strictly increasing");
    }
    if (d < 1) throw UsageError("identity dimension must be at least 1");
  }

  ConcreteIdentity instantiate(std::int64_t p) const {
    ConcreteIdentity c;
    c.name = name;
    c.p = p;
    c.domain_size = static_cast<int>(domain.instantiate(p));
    c.constant = constant;
    for (const auto& t : terms) {
      const std::int64_t l = t.length.instantiate(p);
      if (l < 0) throw UsageError("term length " + t.length.to_string() + " negative at p=" + std::to_string(p));
      if (l > c.domain_size) continue;  // N^l = 0 for l > |J|
      if (!c.terms.empty() && c.terms.back().first == l)
        c.terms.back().second += t.coefficient;
      else
        c.terms.push_back({static_cast<int>(l), t.coefficient});
    }
    return c;
  }

  std::string to_string() const {
    std::string s = std::to_string(constant);
    for (const auto& t : terms) {
      s += t.coefficient < 0 ? " - " : " + ";
      const std::int64_t a = t.coefficient < 0 ? -t.coefficient : t.coefficient;
      if (a != 1) s += std::to_string(a);
      s += "N^{" + t.length.to_string() + "}";
    }
    return s + " == 0 (mod p), |J| = " + domain.to_string();
  }

  // Coefficient tuple (constant, c_1, ..., c_k).
  std::vector<std::int64_t> coefficients() const {
    std::vector<std::int64_t> v{constant};
    for (const auto& t : terms) v.push_back(t.coefficient);
    return v;
  }

  friend bool operator==(const CountIdentity&, const CountIdentity&) = default;
};

// 1 - N^p + N^{2p} - ... + (-1)^{k-1} N^{(k-1)p} == 0 for |J| = kp - 3 over Z_p^3.
inline CountIdentity base_identity(int k) {
  if (k < 4 || k > 9) throw UsageError("base identity index k must be in 4..9");
  CountIdentity I;
  I.name = "base-" + std::to_string(k);
  I.domain = SymbolicLength::make(k, -3);
  I.constant = 1;
  for (int j = 1; j <= k - 1; ++j) I.terms.push_back({SymbolicLength::make(j, 0), (j % 2 == 0) ? 1 : -1});
  I.d = 3;
  I.p_min = 3;
  return I;
}

// 1 - N^{p-1} - N^p + N^{2p-1} + N^{2p} == 0 for |J| = 3p - 3 over Z_p^2.
inline CountIdentity remark_identity_zp2() {
  CountIdentity I;
  I.name = "zp2-3p-3";
  I.domain = SymbolicLength::make(3, -3);
  I.constant = 1;
  I.terms = {{SymbolicLength::make(1, -1), -1},
             {SymbolicLength::make(1, 0), -1},
             {SymbolicLength::make(2, -1), 1},
             {SymbolicLength::make(2, 0), 1}};
  I.d = 2;
  I.p_min = 3;
  return I;
}

// Sum the identity over every size-|domain| subsequence of a size-|target| sequence:
// each length-l subsequence is counted C(target - l, domain - l) times.
inline CountIdentity lift_identity(const CountIdentity& I, const SymbolicLength& target) {
  if (target < I.domain) throw UsageError("lift target " + target.to_string() + " smaller than domain " + I.domain.to_string());
  CountIdentity out;
  out.name = I.name + "@" + target.to_string();
  out.domain = target;
  out.d = I.d;
  out.prime_only = I.prime_only;
  out.p_min = I.p_min;
  const SymbolicValue c0 = symbolic_binom(target, I.domain);
  out.constant = c0.value * I.constant;
  out.p_min = std::max(out.p_min, c0.p_min);
  for (const auto& t : I.terms) {
    const SymbolicValue m = symbolic_binom(target - t.length, I.domain - t.length);
    out.p_min = std::max(out.p_min, m.p_min);
    const std::int64_t coef = m.value * t.coefficient;
    if (coef != 0) out.terms.push_back({t.length, coef});
  }
  return out;
}

// The identities available at size kp - 3: every smaller base identity lifted to
// it, then the base identity of that size.
inline std::vector<CountIdentity> size_system_identities(int k) {
  const SymbolicLength size = SymbolicLength::make(k, -3);
  std::vector<CountIdentity> out;
  for (int j = 4; j < k; ++j) out.push_back(lift_identity(base_identity(j), size));
  out.push_back(base_identity(k));
  return out;
}

// ---------------------------------------------------------------------------
// Empirical verification

struct VerificationReport {
  std::string identity;
  std::int64_t p = 0;
  int trials = 0;
  std::string profile;
  std::uint64_t seed = 0;
  bool out_of_domain = false;
  int failure_count = 0;
  std::vector<ZSequence> failures;  // first few witnesses

  bool pass() const noexcept { return failure_count == 0; }
  std::string status() const { return pass() ? "pass" : "fail"; }
};

struct VerifyOptions {
  bool allow_out_of_domain = false;
  int jobs = 1;
  int max_witnesses = 5;
  // Fraction of trials drawn low-support is one half: even trials uniform, odd low-support.
};

inline std::vector<VerificationReport> verify_identities(const std::vector<CountIdentity>& identities,
                                                         std::int64_t p, int trials, std::uint64_t seed,
                                                         const VerifyOptions& opts = {}) {
  const PrimeModulus prime(p);
  std::vector<VerificationReport> reports(identities.size());
  // Identities with the same (domain, d) share their trial sequences.
  std::map<std::pair<std::int64_t, int>, std::vector<std::size_t>> groups;
  std::vector<ConcreteIdentity> concrete;
  for (std::size_t i = 0; i < identities.size(); ++i) {
    const auto& I = identities[i];
    I.validate();
    const bool out_of_domain = p < I.p_min;
    if (out_of_domain && !opts.allow_out_of_domain)
      throw UsageError("p=" + std::to_string(p) + " is below identity " + I.name + "'s p_min=" +
                       std::to_string(I.p_min) + " (allow out-of-domain probing to override)");
    concrete.push_back(I.instantiate(p));
    reports[i] = {I.name, p, trials, "mixed", seed, out_of_domain, 0, {}};
    groups[{concrete.back().domain_size, I.d}].push_back(i);
  }

  for (const auto& [key, members] : groups) {
    const auto [size, d] = key;
    int max_len = 0;
    for (auto i : members)
      for (const auto& t : concrete[i].terms) max_len = std::max(max_len, t.first);

    struct TrialResult {
      std::vector<std::int64_t> residues_per_identity;
      std::optional<ZSequence> sequence;
    };
    auto results = parallel_map(static_cast<std::size_t>(trials), opts.jobs, [&](std::size_t t) {
      ZSequence J = campaign_sequence(static_cast<int>(p), d, static_cast<int>(size), seed, t);
      const auto res = zero_sum_residues(J, max_len);
      TrialResult r;
      bool any = false;
      for (auto i : members) {
        r.residues_per_identity.push_back(concrete[i].evaluate(res));
        any = any || r.residues_per_identity.back() != 0;
      }
      if (any) r.sequence = std::move(J);
      return r;
    });
    for (const auto& r : results) {
      for (std::size_t m = 0; m < members.size(); ++m) {
        if (r.residues_per_identity[m] == 0) continue;
        auto& rep = reports[members[m]];
        ++rep.failure_count;
        if (static_cast<int>(rep.failures.size()) < opts.max_witnesses) rep.failures.push_back(*r.sequence);
      }
    }
  }
  return reports;
}

inline VerificationReport verify_identity(const CountIdentity& I, std::int64_t p, int trials, std::uint64_t seed,
                                          const VerifyOptions& opts = {}) {
  return verify_identities({I}, p, trials, seed, opts).front();
}

// ---------------------------------------------------------------------------
// Forward substitution

class CannotOrient : public UsageError {
public:
  using UsageError::UsageError;
};

struct Contradiction {
  std::string identity;
  AffineForm residue;
};

struct Derivation {
  std::int64_t p = 0;
  std::map<int, AffineForm> values;                            // length -> N^length
  std::vector<std::pair<std::string, AffineForm>> constraints;  // identities left as parameter relations
  std::vector<std::string> order;                              // identities in the order they were used
  std::optional<Contradiction> contradiction;

  const AffineForm& at(int length) const {
    auto it = values.find(length);
    if (it == values.end()) throw UsageError("length " + std::to_string(length) + " not determined");
    return it->second;
  }
};

// Solve the identities (all at the same p) for the unknown counts, one new
// unknown per identity. Unit pivots keep integer forms exact; other pivots
// divide exactly when possible and otherwise multiply by the inverse mod p.
inline Derivation derive_counts(const std::vector<ConcreteIdentity>& identities,
                                const std::vector<std::pair<int, std::int64_t>>& assumptions,
                                const std::vector<std::pair<int, std::string>>& free) {
  if (identities.empty()) throw UsageError("derive_counts needs at least one identity");
  if (free.size() > 1) throw UsageError("at most one free parameter is supported");
  const std::int64_t p = identities.front().p;
  for (const auto& I : identities)
    if (I.p != p) throw UsageError("identities instantiated at different primes");

  Derivation out;
  out.p = p;
  for (const auto& [l, v] : assumptions) out.values[l] = AffineForm::constant(v);
  for (const auto& [l, name] : free) out.values[l] = AffineForm::variable(name);

  std::vector<bool> used(identities.size(), false);
  auto residue_without = [&](const ConcreteIdentity& I, int skip) {
    AffineForm acc = AffineForm::constant(I.constant);
    for (const auto& [l, c] : I.terms)
      if (l != skip) acc = acc + c * out.values.at(l);
    return acc;
  };

  for (std::size_t done = 0; done < identities.size();) {
    bool progress = false;
    for (std::size_t i = 0; i < identities.size() && !progress; ++i) {
      if (used[i]) continue;
      const auto& I = identities[i];
      std::vector<std::pair<int, std::int64_t>> unknown;
      for (const auto& [l, c] : I.terms)
        if (!out.values.contains(l)) unknown.push_back({l, c});

      if (unknown.empty()) {
        const AffineForm r = residue_without(I, -1);
        used[i] = progress = true;
        ++done;
        out.order.push_back(I.name);
        if (r.is_zero_mod(p)) continue;
        if (mod_floor(r.alpha, p) == 0) {
          out.contradiction = Contradiction{I.name, r};
          return out;
        }
        out.constraints.push_back({I.name, r});
        continue;
      }
      if (unknown.size() != 1) continue;
      const auto [l, c] = unknown.front();
      if (mod_floor(c, p) == 0) continue;
      const AffineForm rest = residue_without(I, l);
      AffineForm x;
      if (c == 1 || c == -1) {
        x = (-c) * rest;
      } else if (rest.alpha % c == 0 && rest.beta % c == 0) {
        x = AffineForm{rest.param, -rest.alpha / c, -rest.beta / c};
      } else {
        x = (mul_mod(p - 1, inverse_mod(c, p), p) * rest).reduced(p);
      }
      if (x.alpha == 0) x.param.clear();
      out.values[l] = x;
      used[i] = progress = true;
      ++done;
      out.order.push_back(I.name);
    }
    if (!progress) {
      for (std::size_t i = 0; i < identities.size(); ++i) {
        if (used[i]) continue;
        std::string unknowns;
        for (const auto& [l, c] : identities[i].terms)
          if (!out.values.contains(l)) unknowns += (unknowns.empty() ? "" : ", ") + std::string("N^") + std::to_string(l);
        throw CannotOrient("cannot orient system: identity " + identities[i].name + " has unknowns {" + unknowns + "}");
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Double counting between sizes

struct Congruence {
  struct Term {
    std::string name;
    std::int64_t coefficient = 0;
    friend bool operator==(const Term&, const Term&) = default;
  };
  std::vector<Term> lhs;
  std::vector<Term> rhs;
  std::int64_t p_min = 2;

  std::string to_string() const {
    auto side = [](const std::vector<Term>& ts) {
      std::string s;
      for (const auto& t : ts) {
        if (!s.empty()) s += t.coefficient < 0 ? " - " : " + ";
        else if (t.coefficient < 0) s += "-";
        const std::int64_t a = t.coefficient < 0 ? -t.coefficient : t.coefficient;
        if (a != 1) s += std::to_string(a);
        s += t.name;
      }
      return s.empty() ? std::string("0") : s;
    };
    return side(lhs) + " == " + side(rhs);
  }
};

// If N^l(I) == c for every I subset J with |I| = small, counting each length-l
// subsequence of J over all such I gives C(big - l, small - l) N^l(J) == C(big, small) c.
inline Congruence relate_parameters(const SymbolicLength& small, const SymbolicLength& big,
                                    const SymbolicLength& length, const std::string& count_name = "",
                                    const std::string& constant_name = "c") {
  if (big < small) throw UsageError("relate_parameters needs small <= big");
  if (small < length) throw UsageError("relate_parameters needs length <= small");
  const SymbolicValue a = symbolic_binom(big - length, small - length);
  const SymbolicValue b = symbolic_binom(big, small);
  Congruence c;
  c.lhs.push_back({count_name.empty() ? "N^{" + length.to_string() + "}(J)" : count_name, a.value});
  c.rhs.push_back({constant_name, b.value});
  c.p_min = std::max(a.p_min, b.p_min);
  return c;
}

// Parameter names used for N^{2p} at each size kp - 3.
inline std::string size_parameter_name(int k) {
  switch (k) {
    case 4: return "c";
    case 5: return "r";
    case 6: return "t";
    case 7: return "m";
    case 8: return "l";
    case 9: return "k";
    default: throw UsageError("no parameter name for size " + std::to_string(k) + "p-3");
  }
}

// Relations between the size parameters as printed alongside the corollaries.
inline std::vector<Congruence> printed_parameter_relations() {
  auto rel = [](std::int64_t a, std::string x, std::int64_t b, std::string y) {
    Congruence c;
    c.lhs.push_back({std::move(x), a});
    c.rhs.push_back({std::move(y), b});
    return c;
  };
  return {rel(5, "r", 3, "t"), rel(5, "r", 2, "m"), rel(7, "r", 2, "l"), rel(3, "k", 14, "t"),
          rel(3, "t", 10, "c"), rel(2, "m", 10, "c"), rel(1, "r", 2, "c")};
}

// Relations recomputed by double counting from size 4p - 3 to each size kp - 3.
inline std::vector<Congruence> recomputed_parameter_relations() {
  std::vector<Congruence> out;
  for (int k = 5; k <= 9; ++k)
    out.push_back(relate_parameters(SymbolicLength::make(4, -3), SymbolicLength::make(k, -3),
                                    SymbolicLength::make(2, 0), size_parameter_name(k), "c"));
  return out;
}

struct RelationCheck {
  Congruence relation;
  bool implied = false;  // follows from the recomputed relations for every c
};

// For each printed relation a X == b Y, decide whether it is implied mod p by
// X == x c, Y == y c from the recomputed double-counting relations.
inline std::vector<RelationCheck> check_printed_relations(std::int64_t p) {
  const PrimeModulus prime(p);
  std::map<std::string, std::int64_t> multiple{{"c", 1}};
  for (const auto& r : recomputed_parameter_relations()) {
    const std::int64_t a = r.lhs.front().coefficient, b = r.rhs.front().coefficient;
    if (mod_floor(a, p) == 0) throw UsageError("relation coefficient vanishes mod p");
    multiple[r.lhs.front().name] = mul_mod(mod_floor(b, p), inverse_mod(a, p), p);
  }
  std::vector<RelationCheck> out;
  for (const auto& r : printed_parameter_relations()) {
    const auto& x = r.lhs.front();
    const auto& y = r.rhs.front();
    const std::int64_t diff = mod_floor(mul_mod(mod_floor(x.coefficient, p), multiple.at(x.name), p) -
                                            mul_mod(mod_floor(y.coefficient, p), multiple.at(y.name), p),
                                        p);
    out.push_back({r, diff == 0});
  }
  return out;
}

// Replay: at |I| = 6p - 3 with N^p = 0, the counts are (t, 3t+10, 3t+15, t+6);
// no 5p zero-sum forces t == -6, and 3t == 10c then gives 5c == -9.
struct Theorem1Chain {
  std::int64_t p = 0;
  Derivation derivation;  // over size 6p - 3 with N^{2p} = t
  std::int64_t t = 0;     // residue of t forced by N^{5p} == 0
  std::int64_t n4p = 0;   // N^{4p} residue at that t
  Congruence relation;    // 3t == 10c
  std::int64_t c_coefficient = 0;  // after dividing out common factors: c_coefficient * c == c_rhs
  std::int64_t c_rhs = 0;
  std::int64_t c = 0;              // residue of c
};

inline Theorem1Chain theorem1_chain(std::int64_t p) {
  const PrimeModulus prime(p);
  Theorem1Chain out;
  out.p = p;
  std::vector<ConcreteIdentity> system;
  for (const auto& I : size_system_identities(6)) system.push_back(I.instantiate(p));
  const int P = static_cast<int>(p);
  out.derivation = derive_counts(system, {{P, 0}}, {{2 * P, "t"}});
  const AffineForm n5 = out.derivation.at(5 * P);
  if (mod_floor(n5.alpha, p) == 0) throw UsageError("N^{5p} does not depend on t");
  // alpha t + beta == 0  =>  t == -beta / alpha
  out.t = mul_mod(mod_floor(-n5.beta, p), inverse_mod(n5.alpha, p), p);
  out.n4p = mod_floor(out.derivation.at(4 * P).evaluate(out.t), p);

  out.relation = relate_parameters(SymbolicLength::make(4, -3), SymbolicLength::make(6, -3),
                                   SymbolicLength::make(2, 0), "t", "c");
  // a t == b c with t fixed: b c == a t_int, where t_int is the integer -beta/alpha when exact.
  const std::int64_t a = out.relation.lhs.front().coefficient;
  const std::int64_t b = out.relation.rhs.front().coefficient;
  const std::int64_t t_int = (n5.beta % n5.alpha == 0) ? -n5.beta / n5.alpha : out.t;
  std::int64_t lhs_c = b, rhs = a * t_int;
  const std::int64_t g = std::gcd(lhs_c, rhs);
  if (g > 1 && mod_floor(g, p) != 0) {
    lhs_c /= g;
    rhs /= g;
  }
  out.c_coefficient = lhs_c;
  out.c_rhs = rhs;
  out.c = mul_mod(mod_floor(rhs, p), inverse_mod(lhs_c, p), p);
  return out;
}

}  // namespace zslab
