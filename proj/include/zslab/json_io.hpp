#pragma once

// JSON interchange: sequence files, identity documents, affine vectors, and
// the report documents written by the command-line tool. Counts that can grow
// beyond 64 bits are written as decimal strings.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "zslab/affine.hpp"
#include "zslab/arith.hpp"
#include "zslab/counting.hpp"
#include "zslab/error.hpp"
#include "zslab/identities.hpp"
#include "zslab/linearfp.hpp"
#include "zslab/polysum.hpp"
#include "zslab/search.hpp"
#include "zslab/sequences.hpp"

namespace zslab {

using Json = nlohmann::json;

namespace detail {

inline const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw UsageError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline std::int64_t require_int(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number_integer()) throw UsageError(std::string("field '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

inline std::int64_t int_or_string(const Json& v, const char* what) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_string()) {
    try {
      std::size_t used = 0;
      const std::string s = v.get<std::string>();
      const long long x = std::stoll(s, &used);
      if (used == s.size()) return x;
    } catch (const std::logic_error&) {
    }
  }
  throw UsageError(std::string(what) + " must be an integer");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Sequences

inline Json sequence_to_json(const ZSequence& J) {
  Json elements = Json::array();
  for (const auto& e : J.positions()) elements.push_back(e.coords);
  return Json{{"n", J.modulus()}, {"d", J.dimension()}, {"elements", std::move(elements)}};
}

inline ZSequence sequence_from_json(const Json& j) {
  const std::int64_t n = detail::require_int(j, "n");
  const std::int64_t d = detail::require_int(j, "d");
  if (n < 2 || n > 1'000'000) throw UsageError("sequence modulus n out of range");
  if (d < 1 || d > 64) throw UsageError("sequence dimension d out of range");
  const Json& elements = detail::require(j, "elements");
  if (!elements.is_array()) throw UsageError("'elements' must be an array");
  ZSequence J(static_cast<int>(n), static_cast<int>(d));
  for (const auto& e : elements) {
    if (!e.is_array()) throw UsageError("each element must be an array of coordinates");
    GroupElement g;
    for (const auto& c : e) {
      if (!c.is_number_integer()) throw UsageError("coordinates must be integers");
      g.coords.push_back(c.get<int>());
    }
    J.add(g);
  }
  return J;
}

// ---------------------------------------------------------------------------
// Identities

inline Json identity_to_json(const CountIdentity& I) {
  Json terms = Json::array();
  for (const auto& t : I.terms) terms.push_back({{"len", t.length.to_string()}, {"coef", t.coefficient}});
  return Json{{"name", I.name},     {"domain", I.domain.to_string()}, {"constant", I.constant},
              {"terms", terms},     {"d", I.d},                       {"p_min", I.p_min},
              {"prime_only", I.prime_only}};
}

inline CountIdentity identity_from_json(const Json& j) {
  CountIdentity I;
  I.name = j.contains("name") && j.at("name").is_string() ? j.at("name").get<std::string>() : "identity";
  const Json& dom = detail::require(j, "domain");
  if (!dom.is_string()) throw UsageError("'domain' must be a length expression");
  I.domain = parse_length(dom.get<std::string>());
  I.constant = detail::require_int(j, "constant");
  const Json& terms = detail::require(j, "terms");
  if (!terms.is_array()) throw UsageError("'terms' must be an array");
  for (const auto& t : terms) {
    const Json& len = detail::require(t, "len");
    if (!len.is_string()) throw UsageError("term 'len' must be a length expression");
    I.terms.push_back({parse_length(len.get<std::string>()), detail::require_int(t, "coef")});
  }
  I.d = j.contains("d") ? static_cast<int>(detail::require_int(j, "d")) : 3;
  I.p_min = j.contains("p_min") ? detail::require_int(j, "p_min") : 3;
  if (j.contains("prime_only")) I.prime_only = j.at("prime_only").get<bool>();
  I.validate();
  return I;
}

inline Json concrete_identity_to_json(const ConcreteIdentity& I) {
  Json terms = Json::array();
  for (const auto& [l, c] : I.terms) terms.push_back({{"len", l}, {"coef", c}});
  return Json{{"name", I.name}, {"p", I.p}, {"domain", I.domain_size}, {"constant", I.constant}, {"terms", terms}};
}

// ---------------------------------------------------------------------------
// Affine vectors

inline Json affine_vector_to_json(const std::vector<AffineForm>& forms, const std::string& param) {
  Json f = Json::array();
  for (const auto& a : forms) f.push_back({a.alpha, a.beta});
  return Json{{"param", param}, {"forms", f}};
}

inline std::vector<AffineForm> affine_vector_from_json(const Json& j) {
  const Json& param = detail::require(j, "param");
  if (!param.is_string() || param.get<std::string>().empty()) throw UsageError("'param' must be a non-empty string");
  const Json& forms = detail::require(j, "forms");
  if (!forms.is_array()) throw UsageError("'forms' must be an array");
  std::vector<AffineForm> out;
  for (const auto& f : forms) {
    if (!f.is_array() || f.size() != 2) throw UsageError("each form must be an [alpha, beta] pair");
    const std::int64_t a = detail::int_or_string(f[0], "alpha"), b = detail::int_or_string(f[1], "beta");
    out.push_back(AffineForm{a == 0 ? "" : param.get<std::string>(), a, b});
  }
  return out;
}

inline std::string affine_param(const std::vector<AffineForm>& forms, const std::string& fallback = "k") {
  for (const auto& f : forms)
    if (f.alpha != 0) return f.param;
  return fallback;
}

// ---------------------------------------------------------------------------
// Reports

inline Json count_to_json(const Count& c) {
  Json j{{"count", c.value.str()}, {"mode", to_string(c.mode)}};
  if (c.mode == CountMode::mod) j["modulus"] = c.modulus;
  return j;
}

inline Json count_vector_to_json(const CountVector& v) {
  Json rows = Json::array();
  for (const auto& [l, c] : v.entries) rows.push_back({{"len", l}, {"count", c.value.str()}});
  return rows;
}

inline Json verification_to_json(const VerificationReport& r) {
  Json failures = Json::array();
  for (const auto& J : r.failures) failures.push_back(sequence_to_json(J));
  return Json{{"identity", r.identity},
              {"p", r.p},
              {"trials", r.trials},
              {"profile", r.profile},
              {"seed", r.seed},
              {"out_of_domain", r.out_of_domain},
              {"failure_count", r.failure_count},
              {"failures", failures},
              {"status", r.status()}};
}

inline Json derivation_to_json(const Derivation& d) {
  Json values = Json::object();
  for (const auto& [l, f] : d.values)
    values[std::to_string(l)] = Json{{"form", f.to_string()}, {"residue", f.reduced(d.p).to_string()}};
  Json constraints = Json::array();
  for (const auto& [name, f] : d.constraints) constraints.push_back({{"identity", name}, {"residual", f.to_string()}});
  Json j{{"p", d.p}, {"values", values}, {"constraints", constraints}, {"order", d.order}};
  if (d.contradiction)
    j["contradiction"] = {{"identity", d.contradiction->identity}, {"residue", d.contradiction->residue.to_string()}};
  else
    j["contradiction"] = nullptr;
  return j;
}

inline Json diffs_to_json(const std::vector<VectorDiff>& diffs) {
  Json out = Json::array();
  for (const auto& d : diffs)
    out.push_back({{"index", d.index},
                   {"length", d.length.to_string()},
                   {"computed", d.computed.to_string()},
                   {"printed", d.printed.to_string()}});
  return out;
}

inline Json exceptional_to_json(const ExceptionalReport& r) {
  Json pairs = Json::array();
  for (const auto& e : r.pairs) {
    Json fac = Json::array();
    for (const auto& [q, m] : e.factorization) fac.push_back({q, m});
    pairs.push_back({{"i", e.i},
                     {"j", e.j},
                     {"forms", {r.forms[e.i].to_string(), r.forms[e.j].to_string()}},
                     {"resultant", e.resultant},
                     {"factorization", fac},
                     {"proportional", e.proportional},
                     {"obstruction", e.reduced_obstruction},
                     {"primes", e.primes}});
  }
  return Json{{"cutoff", r.cutoff},
              {"primes", std::vector<std::int64_t>(r.primes_above_cutoff.begin(), r.primes_above_cutoff.end())},
              {"has_proportional_pair", r.has_proportional_pair},
              {"pairs", pairs}};
}

inline Json lemma3_to_json(const Lemma3Report& r) {
  Json pairs = Json::array(), dev = Json::array();
  for (const auto& v : r.pairs) pairs.push_back({{"m", v.m}, {"n", v.n}, {"value", v.value}});
  for (const auto& v : r.deviating) dev.push_back({{"m", v.m}, {"n", v.n}, {"value", v.value}});
  return Json{{"p", r.p},
              {"counts", r.counts},
              {"pairs", pairs},
              {"all_equal", r.all_equal},
              {"common", r.common ? Json(*r.common) : Json(nullptr)},
              {"deviating", dev}};
}

inline Json theorem3_to_json(const Theorem3Report& r) {
  Json zp = Json::object(), a = Json::object(), b = Json::object();
  for (const auto& [j, v] : r.zero_point) zp[std::to_string(j)] = v;
  for (const auto& [j, v] : r.a) a[std::to_string(j)] = v;
  for (const auto& [j, v] : r.b) b[std::to_string(j)] = v;
  return Json{{"p", r.p},
              {"counts", r.counts},
              {"p_zero_sum_exists", r.p_zero_sum_exists},
              {"lemma3", lemma3_to_json(r.lemma3)},
              {"m", r.m},
              {"zero_point", zp},
              {"a", a},
              {"b", b},
              {"equations_hold", r.equations_hold},
              {"zero_points_distinct", r.zero_points_distinct},
              {"nonzero_indices", r.nonzero_indices},
              {"branch", r.branch}};
}

inline Json s_constant_to_json(const ZeroSumConstantResult& r) {
  return Json{{"n", r.n},
              {"d", r.d},
              {"k", r.k},
              {"complete", r.complete},
              {"value", r.value ? Json(*r.value) : Json(nullptr)},
              {"lower", r.lower},
              {"upper", r.upper},
              {"witness", r.witness ? sequence_to_json(*r.witness) : Json(nullptr)},
              {"certificate",
               {{"nodes", r.nodes},
                {"zero_sum_free_by_size", r.free_counts},
                {"forced_by_size", r.forced_counts},
                {"monotone", r.monotone},
                {"construction_lower", r.construction_lower}}}};
}

inline Json campaign_to_json(const CampaignReport& r) {
  Json ce = Json::array();
  for (const auto& J : r.counterexamples) ce.push_back(sequence_to_json(J));
  Json stats = Json::object();
  for (const auto& [k, v] : r.stats) stats[k] = v;
  return Json{{"statement", r.statement},
              {"p", r.p},
              {"trials", r.trials},
              {"seed", r.seed},
              {"length", r.length},
              {"hypothesis_realized", r.hypothesis_realized},
              {"undetermined", r.undetermined},
              {"counterexample_count", r.counterexample_count},
              {"counterexamples", ce},
              {"status", r.status},
              {"note", r.note},
              {"stats", stats}};
}

}  // namespace zslab
