#pragma once

// Modular and exact binomial arithmetic, plus length expressions of the form
// q*p + r that stay meaningful for every prime above a threshold.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "zslab/error.hpp"

namespace zslab {

using BigInt = boost::multiprecision::cpp_int;

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0 || n % 3 == 0) return false;
  for (std::int64_t f = 5; f * f <= n; f += 6)
    if (n % f == 0 || n % (f + 2) == 0) return false;
  return true;
}

inline std::int64_t next_prime_at_least(std::int64_t n) {
  if (n <= 2) return 2;
  while (!is_prime(n)) ++n;
  return n;
}

class PrimeModulus {
public:
  explicit PrimeModulus(std::int64_t p) : p_(p) {
    if (!is_prime(p)) throw UsageError("modulus " + std::to_string(p) + " is not prime");
    if (p > (std::int64_t{1} << 31)) throw UsageError("modulus too large");
  }

  std::int64_t value() const noexcept { return p_; }
  operator std::int64_t() const noexcept { return p_; }

private:
  std::int64_t p_;
};

// Residue of a in [0, m).
inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline std::int64_t mod_floor(const BigInt& a, std::int64_t m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

inline std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m);
}

inline std::int64_t pow_mod(std::int64_t base, std::uint64_t e, std::int64_t m) {
  std::int64_t result = 1 % m;
  base = mod_floor(base, m);
  while (e) {
    if (e & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    e >>= 1;
  }
  return result;
}

// Inverse of a modulo the prime p; a must be nonzero mod p.
inline std::int64_t inverse_mod(std::int64_t a, std::int64_t p) {
  a = mod_floor(a, p);
  if (a == 0) throw UsageError("zero has no inverse modulo " + std::to_string(p));
  return pow_mod(a, static_cast<std::uint64_t>(p - 2), p);
}

inline BigInt binom_exact(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

namespace detail {

// C(a, b) mod p for 0 <= a, b < p.
inline std::int64_t small_binom_mod(std::int64_t a, std::int64_t b, std::int64_t p) {
  if (b < 0 || b > a) return 0;
  b = std::min(b, a - b);
  std::int64_t num = 1, den = 1;
  for (std::int64_t i = 0; i < b; ++i) {
    num = mul_mod(num, a - i, p);
    den = mul_mod(den, i + 1, p);
  }
  return mul_mod(num, inverse_mod(den, p), p);
}

}  // namespace detail

// C(n, k) mod p by Lucas' theorem. k > n gives 0.
inline std::int64_t binom_mod(std::int64_t n, std::int64_t k, const PrimeModulus& modulus) {
  const std::int64_t p = modulus.value();
  if (n < 0 || k < 0) throw UsageError("binom_mod expects nonnegative arguments");
  if (k > n) return 0;
  std::int64_t result = 1;
  while (k > 0 || n > 0) {
    const std::int64_t nd = n % p, kd = k % p;
    if (kd > nd) return 0;
    result = mul_mod(result, detail::small_binom_mod(nd, kd, p), p);
    n /= p;
    k /= p;
  }
  return result;
}

// Integer-valued binomial polynomial y(y-1)...(y-k+1)/k! evaluated mod p for
// any integer y. Negative y goes through C(y, k) = (-1)^k C(k - y - 1, k),
// so C(-1, k) = (-1)^k.
inline std::int64_t binom_mod_general(std::int64_t y, std::int64_t k, const PrimeModulus& modulus) {
  if (k < 0) return 0;
  if (y >= 0) return binom_mod(y, k, modulus);
  const std::int64_t v = binom_mod(k - y - 1, k, modulus);
  return (k % 2 == 0) ? v : mod_floor(-v, modulus.value());
}

// Length expression q*p + r.
struct SymbolicLength {
  static constexpr int kMaxOffset = 15;

  int q = 0;
  int r = 0;

  constexpr SymbolicLength() = default;
  constexpr SymbolicLength(int q_, int r_) : q(q_), r(r_) {}

  static SymbolicLength make(int q, int r) {
    if (q < 0) throw UsageError("length coefficient of p must be nonnegative");
    if (std::abs(r) > kMaxOffset) throw UsageError("length offset out of range (|r| < 16)");
    if (q == 0 && r < 0) throw UsageError("length expression is negative");
    return {q, r};
  }

  std::int64_t instantiate(std::int64_t p) const { return std::int64_t{q} * p + r; }

  // Smallest prime at which the base-p digit form (q or q-1, r or p+r) is valid.
  std::int64_t min_prime() const {
    std::int64_t need = 2;
    if (r >= 0) {
      need = std::max<std::int64_t>({need, q + 1, r + 1});
    } else {
      need = std::max<std::int64_t>({need, q, -r});
    }
    return next_prime_at_least(need);
  }

  std::string to_string() const {
    std::string s;
    if (q == 0) return std::to_string(r);
    if (q != 1) s += std::to_string(q);
    s += "p";
    if (r > 0) s += "+" + std::to_string(r);
    if (r < 0) s += "-" + std::to_string(-r);
    return s;
  }

  friend constexpr bool operator==(const SymbolicLength&, const SymbolicLength&) = default;
  // Ordering for large p: compare q first, then r.
  friend constexpr auto operator<=>(const SymbolicLength& a, const SymbolicLength& b) {
    if (auto c = a.q <=> b.q; c != 0) return c;
    return a.r <=> b.r;
  }
};

inline SymbolicLength operator-(const SymbolicLength& a, const SymbolicLength& b) {
  return SymbolicLength::make(a.q - b.q, a.r - b.r);
}

inline SymbolicLength operator+(const SymbolicLength& a, const SymbolicLength& b) {
  return SymbolicLength::make(a.q + b.q, a.r + b.r);
}

// Grammar: [<int>] "p" [("+"|"-") <int>]  |  <int>.  Whitespace between tokens is ignored.
inline SymbolicLength parse_length(std::string_view text) {
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto read_int = [&](long& out) -> bool {
    const std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) return false;
    if (pos - start > 6) throw ParseError("integer too long", start);
    out = std::stol(std::string(text.substr(start, pos - start)));
    return true;
  };

  skip_ws();
  if (pos == text.size()) throw ParseError("empty length expression", pos);
  long lead = 0;
  const bool has_lead = read_int(lead);
  skip_ws();
  if (pos == text.size()) {
    if (!has_lead) throw ParseError("expected integer or 'p'", pos);
    if (lead > SymbolicLength::kMaxOffset) throw ParseError("bare integer out of range", 0);
    return SymbolicLength::make(0, static_cast<int>(lead));
  }
  if (text[pos] != 'p') throw ParseError(std::string("unexpected character '") + text[pos] + "'", pos);
  ++pos;
  const int q = has_lead ? static_cast<int>(lead) : 1;
  skip_ws();
  int r = 0;
  if (pos < text.size()) {
    const char sign = text[pos];
    if (sign != '+' && sign != '-')
      throw ParseError(std::string("expected '+' or '-', found '") + sign + "'", pos);
    ++pos;
    skip_ws();
    const std::size_t at = pos;
    long off = 0;
    if (!read_int(off)) throw ParseError("expected integer offset", pos);
    if (off > SymbolicLength::kMaxOffset) throw ParseError("offset out of range (|r| < 16)", at);
    r = sign == '+' ? static_cast<int>(off) : -static_cast<int>(off);
    skip_ws();
    if (pos != text.size()) throw ParseError("trailing characters", pos);
  }
  try {
    return SymbolicLength::make(q, r);
  } catch (const UsageError& e) {
    throw ParseError(e.what(), 0);
  }
}

// An integer standing for C(num(p), den(p)) mod p at every prime p >= p_min.
struct SymbolicValue {
  std::int64_t value = 0;
  std::int64_t p_min = 2;

  friend bool operator==(const SymbolicValue&, const SymbolicValue&) = default;
};

namespace detail {

// Low base-p digit: either the constant c, or p - c.
struct LowDigit {
  bool p_relative;
  int c;
};

inline std::int64_t small_binom_exact(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(binom_exact(a, b));
}

}  // namespace detail

// Reduce C(num, den) mod p to an integer valid for all large primes, via the
// two-digit Lucas decomposition. Mixed low digits use
//   C(p - c, j)        == (-1)^j C(c + j - 1, j),
//   C(p - c1, p - c2)  == C(p - c1, c2 - c1),
//   C(c1, p - c2)      == 0  (c1 < p - c2).
inline SymbolicValue symbolic_binom(const SymbolicLength& num, const SymbolicLength& den) {
  if ((num.q == 0 && num.r < 0) || (den.q == 0 && den.r < 0))
    throw UnsupportedCase("negative length in symbolic binomial " + num.to_string() + " over " +
                          den.to_string());
  std::int64_t need = std::max(num.min_prime(), den.min_prime());

  auto split = [](const SymbolicLength& L, int& high, detail::LowDigit& low) {
    if (L.r >= 0) {
      high = L.q;
      low = {false, L.r};
    } else {
      high = L.q - 1;
      low = {true, -L.r};
    }
  };
  int hn = 0, hd = 0;
  detail::LowDigit ln{}, ld{};
  split(num, hn, ln);
  split(den, hd, ld);

  std::int64_t low = 0;
  if (!ln.p_relative && !ld.p_relative) {
    low = detail::small_binom_exact(ln.c, ld.c);
  } else if (ln.p_relative && !ld.p_relative) {
    const int j = ld.c;
    const std::int64_t v = detail::small_binom_exact(ln.c + j - 1, j);
    low = (j % 2 == 0) ? v : -v;
  } else if (ln.p_relative && ld.p_relative) {
    if (ld.c < ln.c) {
      low = 0;
    } else {
      const int j = ld.c - ln.c;
      const std::int64_t v = detail::small_binom_exact(ld.c - 1, j);
      low = (j % 2 == 0) ? v : -v;
    }
  } else {
    // constant over p - c: zero once p > c1 + c2.
    need = std::max<std::int64_t>(need, ln.c + ld.c + 1);
    low = 0;
  }
  const std::int64_t high = detail::small_binom_exact(hn, hd);
  return {high * low, next_prime_at_least(need)};
}

}  // namespace zslab
