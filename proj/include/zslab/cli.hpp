#pragma once

// Subcommand dispatch for the zslab tool. run_cli returns the process exit
// code: 0 success, 1 verification failure, 2 usage error, 3 budget refusal.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zslab/cache.hpp"
#include "zslab/json_io.hpp"

namespace zslab {

enum ExitCode { kExitOk = 0, kExitFailure = 1, kExitUsage = 2, kExitBudget = 3 };

struct CommandResult {
  Json doc;
  int exit_code = kExitOk;
};

namespace cli_detail {

inline std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json read_json(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw UsageError("invalid JSON in '" + path + "': " + e.what());
  }
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline int to_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::logic_error&) {
  }
  throw UsageError("invalid integer for " + what + ": '" + s + "'");
}

inline GroupElement parse_element(const std::string& s, int d) {
  GroupElement g;
  for (const auto& part : split(s, ',')) g.coords.push_back(to_int(part, "coordinate"));
  if (g.dimension() != d) throw UsageError("target has " + std::to_string(g.dimension()) + " coordinates, expected " + std::to_string(d));
  return g;
}

inline int eval_length(const std::string& expr, std::int64_t p) {
  const SymbolicLength l = parse_length(expr);
  return static_cast<int>(l.instantiate(p));
}

// "EXPR=VALUE" pairs for derive.
inline std::pair<std::string, std::string> split_assignment(const std::string& s) {
  const auto pos = s.find('=');
  if (pos == std::string::npos) throw UsageError("expected LEN=VALUE, got '" + s + "'");
  return {s.substr(0, pos), s.substr(pos + 1)};
}

inline std::string tsv_cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

// TSV: one row per top-level field; arrays of objects become a table.
inline std::string to_tsv(const Json& doc) {
  std::ostringstream out;
  if (doc.is_array()) {
    std::vector<std::string> cols;
    for (const auto& row : doc)
      if (row.is_object())
        for (const auto& [k, v] : row.items())
          if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "\t" : "") << cols[i];
    out << "\n";
    for (const auto& row : doc) {
      for (std::size_t i = 0; i < cols.size(); ++i)
        out << (i ? "\t" : "") << (row.contains(cols[i]) ? tsv_cell(row.at(cols[i])) : "");
      out << "\n";
    }
    return out.str();
  }
  if (!doc.is_object()) return tsv_cell(doc) + "\n";
  for (const auto& [k, v] : doc.items()) out << k << "\t" << tsv_cell(v) << "\n";
  return out.str();
}

inline bool all_pass(const std::vector<VerificationReport>& reps) {
  for (const auto& r : reps)
    if (!r.pass()) return false;
  return true;
}

}  // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"zslab: zero-sum subsequence workbench over Z_n^d", "zslab"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  std::string format = "json";
  std::string cache_dir;
  int jobs = 1;
  std::optional<std::uint64_t> budget;

  std::function<CommandResult()> action;
  std::set<std::string> file_options{"--seq", "--identity", "--forms"};

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "tsv"}));
    sub->add_option("--cache-dir", cache_dir, "Result cache directory (default: $ZSLAB_CACHE)");
    sub->add_option("--jobs", jobs, "Parallel workers (0 = all cores)")->check(CLI::NonNegativeNumber);
    sub->add_option("--budget", budget, "Enumeration budget");
  };

  // Shared parameter storage; each subcommand binds the ones it uses.
  int n = 0, d = 3, k = 1;
  std::string seq_file, len_expr, target, mode_name = "mod", profile_name = "uniform";
  std::string identity_file, forms_file, lens, statement, family, replay, factors_list, what;
  int trials = 100, base_k = 0, size_k = 9, printed_k = 0, instances = 500, m_idx = 0, n_idx = 0;
  std::uint64_t seed = 1;
  std::int64_t cutoff = 7;
  bool remark = false, allow_ood = false, no_symmetry = false, no_translate = false, instantiate = false;
  std::vector<int> system_k;
  std::vector<std::string> assume, free_params;
  std::string param = "k", poly_mode = "both";

  auto load_seq = [&]() {
    if (seq_file.empty()) throw UsageError("--seq FILE is required");
    ZSequence J = sequence_from_json(cli_detail::read_json(seq_file));
    if (n != 0 && n != J.modulus()) throw UsageError("--n does not match the sequence file");
    return J;
  };

  auto identity_source = [&]() -> CountIdentity {
    if (!identity_file.empty()) return identity_from_json(cli_detail::read_json(identity_file));
    if (remark) return remark_identity_zp2();
    if (base_k != 0) return base_identity(base_k);
    throw UsageError("choose an identity with --base-k K, --remark or --identity FILE");
  };

  // count
  auto* count = app.add_subcommand("count", "Count zero-sum (or target-sum) subsequences of a given length");
  add_common(count);
  count->add_option("--n,--p", n, "Modulus (checked against the sequence)");
  count->add_option("--d", d, "Dimension");
  count->add_option("--seq", seq_file, "Sequence JSON file")->required();
  count->add_option("--len", len_expr, "Length expression, evaluated at p = n")->required();
  count->add_option("--target", target, "Target element as comma-separated coordinates (default 0)");
  count->add_option("--mode", mode_name, "mod or exact")->check(CLI::IsMember({"mod", "exact"}));
  count->callback([&] {
    action = [&] {
      const ZSequence J = load_seq();
      const int L = cli_detail::eval_length(len_expr, J.modulus());
      const GroupElement t = target.empty() ? J.zero() : cli_detail::parse_element(target, J.dimension());
      const Count c = count_subsequences(J, L, t, parse_count_mode(mode_name));
      Json doc = count_to_json(c);
      doc["len"] = L;
      doc["n"] = J.modulus();
      doc["target"] = t.coords;
      return CommandResult{doc};
    };
  });

  // profile
  auto* profile = app.add_subcommand("profile", "Zero-sum counts for several lengths from one DP pass");
  add_common(profile);
  profile->add_option("--n,--p", n, "Modulus (checked against the sequence)");
  profile->add_option("--seq", seq_file, "Sequence JSON file")->required();
  profile->add_option("--lens", lens, "Comma-separated length expressions (default: multiples of p)");
  profile->add_option("--mode", mode_name, "mod or exact")->check(CLI::IsMember({"mod", "exact"}));
  profile->callback([&] {
    action = [&] {
      const ZSequence J = load_seq();
      std::vector<int> ls;
      if (lens.empty()) {
        for (int l = 0; l <= J.length(); l += J.modulus()) ls.push_back(l);
      } else {
        for (const auto& e : cli_detail::split(lens, ',')) ls.push_back(cli_detail::eval_length(e, J.modulus()));
      }
      const CountVector v = count_profile(J, ls, parse_count_mode(mode_name));
      return CommandResult{Json{{"n", J.modulus()}, {"mode", mode_name}, {"profile", count_vector_to_json(v)}}};
    };
  });

  // identity
  auto* identity = app.add_subcommand("identity", "Show a counting identity, optionally instantiated at p");
  add_common(identity);
  identity->add_option("--base-k", base_k, "Base identity at size kp-3 (k = 4..9)");
  identity->add_flag("--remark", remark, "The Z_p^2 identity at size 3p-3");
  identity->add_option("--identity", identity_file, "Identity JSON file");
  identity->add_option("--p", n, "Instantiate at this prime");
  identity->callback([&] {
    action = [&] {
      const CountIdentity I = identity_source();
      Json doc = identity_to_json(I);
      doc["text"] = I.to_string();
      if (n != 0) doc["instance"] = concrete_identity_to_json(I.instantiate(PrimeModulus(n).value()));
      return CommandResult{doc};
    };
  });

  // lift
  auto* lift = app.add_subcommand("lift", "Lift an identity to a larger size by double counting");
  add_common(lift);
  lift->add_option("--base-k", base_k, "Base identity at size kp-3 (k = 4..9)");
  lift->add_flag("--remark", remark, "The Z_p^2 identity at size 3p-3");
  lift->add_option("--identity", identity_file, "Identity JSON file");
  lift->add_option("--target", target, "Target size expression, e.g. 9p-3")->required();
  lift->callback([&] {
    action = [&] {
      const CountIdentity I = lift_identity(identity_source(), parse_length(target));
      Json doc = identity_to_json(I);
      doc["coefficients"] = I.coefficients();
      doc["text"] = I.to_string();
      return CommandResult{doc};
    };
  });

  // verify
  auto* verify = app.add_subcommand("verify", "Empirically falsify identities on random sequences");
  add_common(verify);
  verify->add_option("--p", n, "Prime")->required();
  verify->add_option("--base-k", base_k, "Base identity at size kp-3");
  verify->add_option("--system", system_k, "All identities available at size kp-3 (lifts and base)");
  verify->add_flag("--remark", remark, "The Z_p^2 identity at size 3p-3");
  verify->add_option("--identity", identity_file, "Identity JSON file");
  verify->add_option("--trials", trials, "Number of random sequences")->check(CLI::NonNegativeNumber);
  verify->add_option("--seed", seed, "Master seed");
  verify->add_flag("--allow-out-of-domain", allow_ood, "Probe primes below an identity's p_min");
  verify->callback([&] {
    action = [&] {
      std::vector<CountIdentity> ids;
      for (int kk : system_k)
        for (auto& I : size_system_identities(kk)) ids.push_back(I);
      if (ids.empty() || base_k != 0 || remark || !identity_file.empty()) ids.push_back(identity_source());
      VerifyOptions opts;
      opts.allow_out_of_domain = allow_ood;
      opts.jobs = jobs;
      const auto reps = verify_identities(ids, n, trials, seed, opts);
      Json arr = Json::array();
      for (const auto& r : reps) arr.push_back(verification_to_json(r));
      const bool ok = cli_detail::all_pass(reps);
      return CommandResult{Json{{"p", n}, {"seed", seed}, {"trials", trials}, {"reports", arr},
                                {"status", ok ? "pass" : "fail"}},
                           ok ? kExitOk : kExitFailure};
    };
  });

  // derive
  auto* derive = app.add_subcommand("derive", "Forward substitution over the identities at size kp-3");
  add_common(derive);
  derive->add_option("--p", n, "Prime")->required();
  derive->add_option("--size", size_k, "System size kp-3 (k = 4..9)");
  derive->add_option("--assume", assume, "Known count LEN=VALUE, e.g. p=0")->take_all();
  derive->add_option("--free", free_params, "Free count LEN=NAME, e.g. 2p=t")->take_all();
  derive->add_option("--replay", replay, "lemma1, lemma2 or theorem1")
      ->check(CLI::IsMember({"lemma1", "lemma2", "theorem1"}));
  derive->callback([&] {
    action = [&]() -> CommandResult {
      const PrimeModulus prime(n);
      const std::int64_t p = prime.value();
      if (replay == "theorem1") {
        const Theorem1Chain ch = theorem1_chain(p);
        return CommandResult{Json{{"p", p},
                                  {"derivation", derivation_to_json(ch.derivation)},
                                  {"t", ch.t},
                                  {"n4p", ch.n4p},
                                  {"relation", ch.relation.to_string()},
                                  {"c_equation", std::to_string(ch.c_coefficient) + "c == " + std::to_string(ch.c_rhs)},
                                  {"c", ch.c}}};
      }
      std::vector<std::pair<int, std::int64_t>> as;
      std::vector<std::pair<int, std::string>> fr;
      int K = size_k;
      if (replay == "lemma1") {
        K = 5;
        as = {{static_cast<int>(p), 0}, {static_cast<int>(2 * p), 0}};
      } else if (replay == "lemma2") {
        K = 7;
        as = {{static_cast<int>(p), 0}, {static_cast<int>(3 * p), 0}};
      }
      for (const auto& a : assume) {
        const auto [l, v] = cli_detail::split_assignment(a);
        as.push_back({cli_detail::eval_length(l, p), cli_detail::to_int(v, "assumed value")});
      }
      for (const auto& f : free_params) {
        const auto [l, v] = cli_detail::split_assignment(f);
        fr.push_back({cli_detail::eval_length(l, p), v});
      }
      std::vector<ConcreteIdentity> sys;
      for (const auto& I : size_system_identities(K)) {
        if (p < I.p_min) throw UsageError("p=" + std::to_string(p) + " is below " + I.name + "'s p_min=" + std::to_string(I.p_min));
        sys.push_back(I.instantiate(p));
      }
      const Derivation dv = derive_counts(sys, as, fr);
      Json doc = derivation_to_json(dv);
      doc["size"] = SymbolicLength::make(K, -3).to_string();
      return CommandResult{doc};
    };
  });

  // solve
  auto* solve = app.add_subcommand("solve", "Solve the triangular system at size kp-3 over affine forms");
  add_common(solve);
  solve->add_option("--size", size_k, "System size kp-3 (k = 4..9)");
  solve->add_option("--param", param, "Name of the N^{2p} parameter");
  solve->callback([&] {
    action = [&] {
      const TriangularSystem sys = assemble_system(SymbolicLength::make(size_k, -3), param);
      const auto x = solve_triangular(sys);
      Json sol = Json::array(), rows = Json::array(), unknowns = Json::array();
      for (const auto& f : x) sol.push_back(f.to_string());
      for (const auto& u : sys.unknowns) unknowns.push_back("N^{" + u.to_string() + "}");
      for (const auto& r : sys.rows) rows.push_back({{"coefficients", r.coefficients}, {"rhs", r.rhs.to_string()}, {"source", r.source}});
      Json res = Json::array();
      bool zero = true;
      for (const auto& r : residual_check(sys, x)) {
        res.push_back(r.to_string());
        zero = zero && r.is_zero();
      }
      Json doc{{"size", sys.size.to_string()}, {"unknowns", unknowns},  {"rows", rows},
               {"solution", sol},               {"residuals", res},      {"residuals_zero", zero},
               {"affine", affine_vector_to_json(x, param)}};
      if (size_k >= 5) {
        auto printed = printed_solution(size_k);
        for (auto& f : printed)
          if (f.alpha != 0) f.param = param;
        doc["diff_vs_printed"] = diffs_to_json(compare_solutions(sys, x, printed));
      }
      return CommandResult{doc};
    };
  });

  // exceptional
  auto* exceptional = app.add_subcommand("exceptional", "Primes at which two affine counts vanish together");
  add_common(exceptional);
  exceptional->add_option("--forms", forms_file, "Affine-vector JSON file");
  exceptional->add_option("--printed", printed_k, "Use the printed solution vector at size kp-3");
  exceptional->add_option("--size", size_k, "Use the computed solution vector at size kp-3");
  exceptional->add_option("--cutoff", cutoff, "Ignore primes at or below this");
  exceptional->callback([&] {
    action = [&] {
      std::vector<AffineForm> forms;
      if (!forms_file.empty()) forms = affine_vector_from_json(cli_detail::read_json(forms_file));
      else if (printed_k != 0) forms = printed_solution(printed_k);
      else forms = solve_triangular(assemble_system(SymbolicLength::make(size_k, -3)));
      return CommandResult{exceptional_to_json(exceptional_primes(forms, cutoff))};
    };
  });

  // polysum
  auto* polysum = app.add_subcommand("polysum", "Polynomial-method sums: direct summation vs count reduction");
  add_common(polysum);
  polysum->add_option("--seq", seq_file, "Sequence JSON file")->required();
  polysum->add_option("--factors", factors_list, "Comma-separated factor indices i (product over C(S_i)...)");
  polysum->add_option("--m", m_idx, "Omitted pair (m, n) for the 9p-3 family");
  polysum->add_option("--pair-n", n_idx, "Second index of the omitted pair");
  polysum->add_option("--method", poly_mode, "direct, reduced or both")->check(CLI::IsMember({"direct", "reduced", "both"}));
  polysum->callback([&] {
    action = [&]() -> CommandResult {
      const ZSequence J = load_seq();
      DownsizedPolySpec spec{J, {}};
      if (m_idx != 0 || n_idx != 0) spec.factors = pair_factors(m_idx, n_idx);
      else if (!factors_list.empty())
        for (const auto& f : cli_detail::split(factors_list, ',')) spec.factors.push_back(cli_detail::to_int(f, "factor"));
      else throw UsageError("give --factors or --m/--pair-n");
      Json doc{{"n", J.modulus()}, {"length", J.length()}, {"factors", spec.factors}};
      std::optional<std::int64_t> direct, reduced;
      if (poly_mode != "direct") reduced = polysum_reduction_downsized(spec);
      if (poly_mode != "reduced") direct = polysum_direct_downsized(spec, budget.value_or(kDefaultPointBudget), jobs);
      if (reduced) doc["reduced"] = *reduced;
      if (direct) doc["direct"] = *direct;
      int code = kExitOk;
      if (direct && reduced) {
        doc["equal"] = *direct == *reduced;
        if (*direct != *reduced) code = kExitFailure;
      }
      return CommandResult{doc, code};
    };
  });

  // lemma3
  auto* lemma3 = app.add_subcommand("lemma3", "All 28 omitted-pair sums for a sequence of size 9p-3");
  add_common(lemma3);
  lemma3->add_option("--seq", seq_file, "Sequence JSON file")->required();
  lemma3->callback([&] {
    action = [&] {
      const auto rep = lemma3_check(load_seq());
      return CommandResult{lemma3_to_json(rep), rep.all_equal ? kExitOk : kExitFailure};
    };
  });

  // theorem3
  auto* theorem3 = app.add_subcommand("theorem3", "Zero-point analysis for a sequence of size 9p-3, p > 7");
  add_common(theorem3);
  theorem3->add_option("--seq", seq_file, "Sequence JSON file")->required();
  theorem3->callback([&] {
    action = [&] {
      const auto rep = theorem3_verdict(load_seq());
      return CommandResult{theorem3_to_json(rep), rep.branch == "violated" ? kExitFailure : kExitOk};
    };
  });

  // construct
  auto* construct = app.add_subcommand("construct", "Emit a named or random sequence");
  add_common(construct);
  construct->add_option("--family", family, "theorem2, cube, egz-d1, kemnitz-d2 or random")
      ->required()
      ->check(CLI::IsMember({"theorem2", "cube", "egz-d1", "kemnitz-d2", "random"}));
  construct->add_option("--n,--p", n, "Modulus")->required();
  construct->add_option("--d", d, "Dimension");
  construct->add_option("--len", len_expr, "Length expression (random family)");
  construct->add_option("--profile", profile_name, "uniform or low-support:S");
  construct->add_option("--seed", seed, "Seed (random family)");
  construct->callback([&] {
    action = [&] {
      if (family == "theorem2") return CommandResult{sequence_to_json(theorem2_construction(PrimeModulus(n)))};
      if (family == "cube") return CommandResult{sequence_to_json(cube_construction(n, d))};
      if (family != "random") return CommandResult{sequence_to_json(known_extremal(family, n))};
      if (len_expr.empty()) throw UsageError("--len is required for the random family");
      const ZSequence J = random_sequence(n, d, cli_detail::eval_length(len_expr, n), GeneratorProfile::parse(profile_name), seed);
      Json doc = sequence_to_json(J);
      doc["seed"] = seed;
      doc["profile"] = profile_name;
      return CommandResult{doc};
    };
  });

  // search
  auto* search = app.add_subcommand("search", "Exhaustive search for zero-sum constants");
  add_common(search);
  search->add_option("what", what, "s-constant")->required()->check(CLI::IsMember({"s-constant"}));
  search->add_option("--n", n, "Modulus")->required();
  search->add_option("--d", d, "Dimension");
  search->add_option("--k", k, "Zero-sum length multiple kn");
  search->add_flag("--no-symmetry", no_symmetry, "Disable coordinate-permutation reduction");
  search->add_flag("--no-translate", no_translate, "Disable translation reduction");
  search->callback([&] {
    action = [&] {
      SearchOptions opts;
      if (budget) opts.node_budget = *budget;
      opts.permute_coordinates = !no_symmetry;
      opts.translate_to_zero = !no_translate;
      opts.jobs = jobs;
      const auto r = s_constant(n, d, k, opts);
      return CommandResult{s_constant_to_json(r), r.complete ? (r.monotone ? kExitOk : kExitFailure) : kExitBudget};
    };
  });

  // campaign
  auto* campaign = app.add_subcommand("campaign", "Randomized falsification campaign for a statement");
  add_common(campaign);
  std::vector<std::string> ids;
  for (const auto& s : statement_catalog()) ids.push_back(s.id);
  campaign->add_option("--statement", statement, "Statement id")->required()->check(CLI::IsMember(ids));
  campaign->add_option("--p", n, "Prime")->required();
  campaign->add_option("--trials", trials, "Number of random sequences")->check(CLI::NonNegativeNumber);
  campaign->add_option("--seed", seed, "Master seed");
  campaign->callback([&] {
    action = [&] {
      CampaignOptions opts;
      opts.jobs = jobs;
      if (budget) opts.sub_multiset_budget = *budget;
      const auto r = verify_statement(statement, n, trials, seed, opts);
      return CommandResult{campaign_to_json(r), r.pass() ? kExitOk : kExitFailure};
    };
  });

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Compare the DP counter against brute-force enumeration");
  add_common(oracle);
  oracle->add_option("--seq", seq_file, "Sequence JSON file (otherwise random instances)");
  oracle->add_option("--len", len_expr, "Length expression (default: all lengths)");
  oracle->add_option("--target", target, "Target element (default: all targets)");
  oracle->add_option("--instances", instances, "Random instances when no --seq is given")->check(CLI::NonNegativeNumber);
  oracle->add_option("--seed", seed, "Master seed");
  oracle->callback([&] {
    action = [&] {
      const std::uint64_t b = budget.value_or(kDefaultEnumerationBudget);
      std::vector<ZSequence> cases;
      if (!seq_file.empty()) {
        cases.push_back(load_seq());
      } else {
        const int moduli[] = {2, 3, 5};
        for (int i = 0; i < instances; ++i) {
          const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(i));
          const int nn = moduli[mix_seed(s) % 3];
          const int dd = 1 + static_cast<int>(mix_seed(s + 1) % 2);
          const int len = static_cast<int>(mix_seed(s + 2) % 13);
          cases.push_back(campaign_sequence(nn, dd, len, s, static_cast<std::size_t>(i)));
        }
      }
      std::uint64_t checks = 0, mismatches = 0;
      Json bad = Json::array();
      for (const auto& J : cases) {
        const std::size_t G = group_order(J.modulus(), J.dimension());
        std::vector<int> ls;
        if (!len_expr.empty()) ls.push_back(cli_detail::eval_length(len_expr, J.modulus()));
        else
          for (int l = 0; l <= J.length(); ++l) ls.push_back(l);
        std::vector<GroupElement> ts;
        if (!target.empty()) ts.push_back(cli_detail::parse_element(target, J.dimension()));
        else
          for (std::size_t t = 0; t < G; ++t) ts.push_back(unflatten(t, J.modulus(), J.dimension()));
        for (int l : ls)
          for (const auto& t : ts) {
            ++checks;
            const Count dp = count_subsequences(J, l, t, CountMode::exact);
            const Count bf = brute_force_count(J, l, t, b);
            if (dp.value != bf.value) {
              ++mismatches;
              if (bad.size() < 5)
                bad.push_back({{"sequence", sequence_to_json(J)}, {"len", l}, {"target", t.coords},
                               {"dp", dp.value.str()}, {"brute_force", bf.value.str()}});
            }
          }
      }
      return CommandResult{Json{{"instances", cases.size()}, {"checks", checks}, {"mismatches", mismatches},
                                {"examples", bad}, {"seed", seed}, {"status", mismatches == 0 ? "pass" : "fail"}},
                           mismatches == 0 ? kExitOk : kExitFailure};
    };
  });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  auto run = [&]() -> CachedResult {
    const CommandResult r = action();
    std::string text = format == "tsv" ? cli_detail::to_tsv(r.doc) : r.doc.dump(2) + "\n";
    return {r.exit_code, text, false};
  };

  try {
    if (cache_dir.empty())
      if (const char* env = std::getenv("ZSLAB_CACHE")) cache_dir = env;
    CachedResult result;
    if (cache_dir.empty()) {
      result = run();
    } else {
      Json request{{"subcommand", sub->get_name()}};
      Json options = Json::object();
      for (const CLI::Option* opt : sub->get_options()) {
        if (opt->count() == 0) continue;
        const std::string name = opt->get_name();
        if (name == "--cache-dir" || name == "--jobs" || name == "--help") continue;
        if (file_options.contains(name)) {
          Json contents = Json::array();
          for (const auto& path : opt->results()) contents.push_back(cli_detail::read_file(path));
          options[name] = contents;
        } else {
          options[name] = opt->results();
        }
      }
      request["options"] = options;
      result = ResultCache(cache_dir).get_or_compute(request.dump(), run, err);
    }
    out << result.result;
    return result.exit_code;
  } catch (const BudgetExceeded& e) {
    err << "budget refusal: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace zslab
