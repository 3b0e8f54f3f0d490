#pragma once

#include <cstdint>
#include <string>

#include "zslab/arith.hpp"
#include "zslab/error.hpp"

namespace zslab {

// alpha * x + beta over the integers, x a named parameter. alpha == 0 is a constant
// and carries no parameter requirement.
struct AffineForm {
  std::string param;
  std::int64_t alpha = 0;
  std::int64_t beta = 0;

  static AffineForm constant(std::int64_t b) { return {"", 0, b}; }
  static AffineForm variable(std::string name) { return {std::move(name), 1, 0}; }

  bool is_constant() const noexcept { return alpha == 0; }
  bool is_zero() const noexcept { return alpha == 0 && beta == 0; }
  bool is_zero_mod(std::int64_t p) const { return mod_floor(alpha, p) == 0 && mod_floor(beta, p) == 0; }

  std::int64_t evaluate(std::int64_t x) const { return alpha * x + beta; }

  AffineForm reduced(std::int64_t p) const {
    AffineForm r{param, mod_floor(alpha, p), mod_floor(beta, p)};
    if (r.alpha == 0) r.param.clear();
    return r;
  }

  std::string to_string() const {
    if (alpha == 0) return std::to_string(beta);
    std::string s;
    if (alpha == -1) s = "-";
    else if (alpha != 1) s = std::to_string(alpha);
    s += param;
    if (beta > 0) s += "+" + std::to_string(beta);
    if (beta < 0) s += std::to_string(beta);
    return s;
  }

  // Equality of forms; a constant compares equal regardless of the parameter label.
  friend bool operator==(const AffineForm& a, const AffineForm& b) {
    if (a.alpha != b.alpha || a.beta != b.beta) return false;
    return a.alpha == 0 || a.param == b.param;
  }
};

namespace detail {
inline std::string merged_param(const AffineForm& a, const AffineForm& b) {
  if (a.alpha != 0 && b.alpha != 0 && a.param != b.param)
    throw UsageError("affine forms in different parameters: " + a.param + ", " + b.param);
  return a.alpha != 0 ? a.param : b.param;
}
}  // namespace detail

inline AffineForm operator+(const AffineForm& a, const AffineForm& b) {
  AffineForm r{detail::merged_param(a, b), a.alpha + b.alpha, a.beta + b.beta};
  if (r.alpha == 0) r.param.clear();
  return r;
}

inline AffineForm operator-(const AffineForm& a) { return {a.param, -a.alpha, -a.beta}; }
inline AffineForm operator-(const AffineForm& a, const AffineForm& b) { return a + (-b); }

inline AffineForm operator*(std::int64_t k, const AffineForm& a) {
  AffineForm r{a.param, k * a.alpha, k * a.beta};
  if (r.alpha == 0) r.param.clear();
  return r;
}

}  // namespace zslab
