#pragma once

// Exact affine-form linear algebra for the triangular count systems, and the
// analysis of primes at which two parameterized counts can vanish together.

#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "zslab/affine.hpp"
#include "zslab/arith.hpp"
#include "zslab/error.hpp"
#include "zslab/identities.hpp"

namespace zslab {

struct TriangularSystem {
  struct Row {
    std::vector<std::int64_t> coefficients;  // over unknowns
    AffineForm rhs;
    std::string source;
  };

  SymbolicLength size;
  std::string parameter;
  std::vector<SymbolicLength> unknowns;
  std::vector<Row> rows;
};

// Rows: N^{2p} = parameter, then each smaller base identity lifted to `size`, then
// the base identity at `size`; the N^p column is dropped (assumed zero).
inline TriangularSystem assemble_system(const SymbolicLength& size, const std::string& parameter = "k") {
  if (size.r != -3 || size.q < 4 || size.q > 9)
    throw UsageError("unsupported system size " + size.to_string() + " (expected kp-3, 4 <= k <= 9)");
  const int k = size.q;
  TriangularSystem sys;
  sys.size = size;
  sys.parameter = parameter;
  for (int j = 2; j <= k - 1; ++j) sys.unknowns.push_back(SymbolicLength::make(j, 0));
  const std::size_t n = sys.unknowns.size();

  TriangularSystem::Row first;
  first.coefficients.assign(n, 0);
  first.coefficients[0] = 1;
  first.rhs = AffineForm::variable(parameter);
  first.source = "assumption N^{2p} = " + parameter;
  sys.rows.push_back(first);

  for (const auto& I : size_system_identities(k)) {
    TriangularSystem::Row row;
    row.coefficients.assign(n, 0);
    row.source = I.name;
    for (const auto& t : I.terms) {
      if (t.length == SymbolicLength::make(1, 0)) continue;
      if (t.length.r != 0 || t.length.q < 2 || t.length.q > k - 1)
        throw UsageError("unexpected term N^{" + t.length.to_string() + "} in " + I.name);
      row.coefficients[static_cast<std::size_t>(t.length.q - 2)] = t.coefficient;
    }
    row.rhs = AffineForm::constant(-I.constant);
    sys.rows.push_back(std::move(row));
  }
  return sys;
}

class NonUnitPivot : public UsageError {
public:
  using UsageError::UsageError;
};

inline std::vector<AffineForm> solve_triangular(const TriangularSystem& sys) {
  const std::size_t n = sys.unknowns.size();
  if (sys.rows.size() != n) throw UsageError("system is not square");
  std::vector<AffineForm> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = sys.rows[i];
    for (std::size_t j = i + 1; j < n; ++j)
      if (row.coefficients[j] != 0) throw UsageError("system is not lower triangular (row " + std::to_string(i) + ")");
    const std::int64_t pivot = row.coefficients[i];
    if (pivot != 1 && pivot != -1)
      throw NonUnitPivot("pivot " + std::to_string(pivot) + " in row " + std::to_string(i) + " is not +-1");
    AffineForm acc = row.rhs;
    for (std::size_t j = 0; j < i; ++j) acc = acc - row.coefficients[j] * x[j];
    x[i] = pivot * acc;
  }
  return x;
}

// Row residuals sum_j A_ij x_j - rhs_i; all identically zero for a true solution.
inline std::vector<AffineForm> residual_check(const TriangularSystem& sys, const std::vector<AffineForm>& solution) {
  if (solution.size() != sys.unknowns.size()) throw UsageError("solution length does not match system");
  std::vector<AffineForm> out;
  for (const auto& row : sys.rows) {
    AffineForm acc = -row.rhs;
    for (std::size_t j = 0; j < solution.size(); ++j) acc = acc + row.coefficients[j] * solution[j];
    out.push_back(acc);
  }
  return out;
}

// Solution vectors (N^{2p}, ..., N^{(k-1)p}) as printed for sizes 5p-3 .. 9p-3.
inline std::vector<AffineForm> printed_solution(int k) {
  auto f = [](const std::string& x, std::int64_t a, std::int64_t b) { return AffineForm{x, a, b}; };
  switch (k) {
    case 5: return {f("r", 1, 0), f("r", 2, 4), f("r", 1, 3)};
    case 6: return {f("t", 1, 0), f("t", 3, 10), f("t", 3, 15), f("t", 1, 6)};
    case 7: return {f("m", 1, 0), f("m", 4, 20), f("m", 6, 45), f("m", 4, 36), f("m", 1, 10)};
    case 8: return {f("l", 1, 0), f("l", 5, 35), f("l", 10, 105), f("l", 10, 122), f("l", 5, 52), f("l", 1, 1)};
    case 9: return {f("k", 1, 0), f("k", 6, 56), f("k", 15, 210), f("k", 20, 336), f("k", 15, 252), f("k", 6, 120), f("k", 1, 21)};
    default: throw UsageError("no printed solution for size " + std::to_string(k) + "p-3");
  }
}

struct VectorDiff {
  std::size_t index = 0;
  SymbolicLength length;
  AffineForm computed;
  AffineForm printed;
};

inline std::vector<VectorDiff> compare_solutions(const TriangularSystem& sys, const std::vector<AffineForm>& computed,
                                                 const std::vector<AffineForm>& printed) {
  if (computed.size() != printed.size()) throw UsageError("vectors differ in length");
  std::vector<VectorDiff> out;
  for (std::size_t i = 0; i < computed.size(); ++i)
    if (!(computed[i] == printed[i])) out.push_back({i, sys.unknowns[i], computed[i], printed[i]});
  return out;
}

// ---------------------------------------------------------------------------

inline std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  std::vector<std::pair<std::int64_t, int>> out;
  if (n < 0) n = -n;
  if (n < 2) return out;
  for (std::int64_t f = 2; f * f <= n; ++f) {
    int e = 0;
    while (n % f == 0) {
      n /= f;
      ++e;
    }
    if (e) out.push_back({f, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

// True iff a1 x + b1 == 0 and a2 x + b2 == 0 have a common solution mod p.
inline bool common_root_mod(const AffineForm& f, const AffineForm& g, std::int64_t p) {
  const std::int64_t a1 = mod_floor(f.alpha, p), b1 = mod_floor(f.beta, p);
  const std::int64_t a2 = mod_floor(g.alpha, p), b2 = mod_floor(g.beta, p);
  if (a1 != 0) {
    const std::int64_t x = mul_mod(mod_floor(-b1, p), inverse_mod(a1, p), p);
    return mod_floor(a2 * x + b2, p) == 0;
  }
  if (b1 != 0) return false;
  return a2 != 0 || b2 == 0;
}

struct ExceptionalPair {
  std::size_t i = 0, j = 0;
  std::int64_t resultant = 0;  // alpha_i beta_j - alpha_j beta_i
  std::vector<std::pair<std::int64_t, int>> factorization;
  bool proportional = false;   // resultant == 0: vanish together at every prime
  std::int64_t reduced_obstruction = 0;  // resultant / gcd(alpha_i, alpha_j)
  std::vector<std::int64_t> primes;      // primes above cutoff admitting a common root
};

struct ExceptionalReport {
  std::int64_t cutoff = 7;
  std::vector<AffineForm> forms;
  std::vector<ExceptionalPair> pairs;
  std::set<std::int64_t> primes_above_cutoff;
  bool has_proportional_pair = false;
};

inline ExceptionalReport exceptional_primes(const std::vector<AffineForm>& forms, std::int64_t cutoff = 7) {
  std::string param;
  for (const auto& f : forms) {
    if (f.alpha == 0) continue;
    if (param.empty()) param = f.param;
    else if (f.param != param) throw UsageError("forms use different parameters");
  }
  ExceptionalReport rep;
  rep.cutoff = cutoff;
  rep.forms = forms;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    for (std::size_t j = i + 1; j < forms.size(); ++j) {
      ExceptionalPair e;
      e.i = i;
      e.j = j;
      e.resultant = forms[i].alpha * forms[j].beta - forms[j].alpha * forms[i].beta;
      e.factorization = factorize(e.resultant);
      e.proportional = e.resultant == 0;
      const std::int64_t g = std::gcd(forms[i].alpha, forms[j].alpha);
      e.reduced_obstruction = g == 0 ? e.resultant : e.resultant / g;
      if (e.proportional) {
        rep.has_proportional_pair = true;
      } else {
        for (const auto& [q, mult] : e.factorization) {
          if (q <= cutoff) continue;
          if (common_root_mod(forms[i], forms[j], q)) {
            e.primes.push_back(q);
            rep.primes_above_cutoff.insert(q);
          }
        }
      }
      rep.pairs.push_back(std::move(e));
    }
  }
  return rep;
}

}  // namespace zslab
