#pragma once

/**
 * @file ffield.hpp
 * @brief Prime-field arithmetic and multiplicative characters.
 *
 * Field elements are plain uint64_t values kept in [0, p). Products are
 * reduced through unsigned __int128 so every operation is exact for any
 * 64-bit modulus.
 *
 * A Character of requested order ell over F_p has effective order
 * d = gcd(ell, p - 1). Its values are reported as unity indices j in
 * [0, d), standing for zeta_d^j; no complex number is formed until a
 * caller asks for a magnitude.
 */

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#if !defined(__SIZEOF_INT128__)
#error "curvestat requires compiler support for unsigned __int128"
#endif

namespace curvestat {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline constexpr u64 mul_mod(u64 a, u64 b, u64 p) {
  return static_cast<u64>((static_cast<u128>(a) * b) % p);
}

inline constexpr u64 add_mod(u64 a, u64 b, u64 p) {
  u64 s = a + b;
  if (s < a || s >= p) s -= p;
  return s;
}

inline constexpr u64 sub_mod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + (p - b); }

/// base^exp mod p by square-and-multiply.
inline constexpr u64 pow_mod(u64 base, u64 exp, u64 p) {
  if (p == 1) return 0;
  u64 result = 1 % p;
  base %= p;
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, p);
    base = mul_mod(base, base, p);
    exp >>= 1U;
  }
  return result;
}

/// Inverse of a nonzero element modulo a prime (Fermat).
inline u64 inv_mod(u64 a, u64 p) {
  if (a % p == 0) throw std::domain_error("inv_mod: zero has no inverse");
  return pow_mod(a, p - 2, p);
}

// Deterministic Miller-Rabin. The first twelve primes as witnesses are
// sufficient for every n < 3.3e24, hence for all 64-bit inputs.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  static constexpr u64 kWitnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 q : kWitnesses) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (u64 a : kWitnesses) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace detail {

inline u64 pollard_rho(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    auto f = [&](u64 x) { return add_mod(mul_mod(x, x, n), c, n); };
    u64 x = 2, y = 2, d = 1;
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

inline void factor_into(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    if (n % q == 0) {
      out.push_back(q);
      factor_into(n / q, out);
      return;
    }
  }
  u64 d = pollard_rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace detail

/// Prime factorization as sorted (prime, exponent) pairs.
inline std::vector<std::pair<u64, int>> factorize(u64 n) {
  std::vector<u64> primes;
  detail::factor_into(n, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<u64, int>> out;
  for (u64 q : primes) {
    if (!out.empty() && out.back().first == q) {
      ++out.back().second;
    } else {
      out.emplace_back(q, 1);
    }
  }
  return out;
}

namespace detail {

inline bool is_generator(u64 g, u64 p, const std::vector<std::pair<u64, int>>& factors) {
  if (g % p == 0) return false;
  for (const auto& [q, e] : factors) {
    if (pow_mod(g, (p - 1) / q, p) == 1) return false;
  }
  return true;
}

}  // namespace detail

/// Smallest g >= 2 of multiplicative order p - 1. For p = 3 this is 2.
inline u64 primitive_root(u64 p) {
  if (p < 3 || !is_prime(p)) {
    throw std::invalid_argument("primitive_root: p must be an odd prime, got " + std::to_string(p));
  }
  const auto factors = factorize(p - 1);
  for (u64 g = 2; g < p; ++g) {
    if (detail::is_generator(g, p, factors)) return g;
  }
  throw std::logic_error("primitive_root: no generator found");
}

/// A validated odd prime together with a primitive root and the
/// factorization of p - 1.
class FieldSpec {
 public:
  explicit FieldSpec(u64 p) : p_(p) {
    if (p < 3 || !is_prime(p)) {
      throw std::invalid_argument("FieldSpec: p must be an odd prime, got " + std::to_string(p));
    }
    factors_ = factorize(p - 1);
    g_ = 0;
    for (u64 g = 2; g < p; ++g) {
      if (detail::is_generator(g, p, factors_)) {
        g_ = g;
        break;
      }
    }
  }

  u64 p() const noexcept { return p_; }
  u64 generator() const noexcept { return g_; }
  const std::vector<std::pair<u64, int>>& order_factors() const noexcept { return factors_; }

  bool operator==(const FieldSpec& o) const noexcept { return p_ == o.p_; }

 private:
  u64 p_;
  u64 g_;
  std::vector<std::pair<u64, int>> factors_;
};

/// Value of a multiplicative character: Zero for the argument 0, else the
/// exponent j of zeta_d^j.
struct CharValue {
  static constexpr std::uint32_t kZero = 0xFFFFFFFFU;
  std::uint32_t raw = kZero;

  static constexpr CharValue zero() { return {}; }
  static constexpr CharValue unity(std::uint32_t j) { return CharValue{j}; }

  constexpr bool is_zero() const { return raw == kZero; }
  constexpr std::uint32_t index() const { return raw; }
  constexpr bool operator==(const CharValue&) const = default;
};

enum class CharMode {
  per_element,  // one pow_mod per evaluation
  table,        // full index table, allowed for p <= 2^24
  automatic,    // table when p <= 2^24, else per_element
};

inline constexpr u64 kCharTableLimit = u64{1} << 24;

/// Multiplicative character of requested order ell >= 2 over F_p.
///
/// Effective order d = gcd(ell, p-1). match_table()[k] = g^(k(p-1)/d), so
/// x^((p-1)/d) = match_table()[j] identifies chi(x) = zeta_d^j.
class Character {
 public:
  Character(FieldSpec field, u64 ell, CharMode mode = CharMode::automatic)
      : field_(std::move(field)), ell_(ell) {
    if (ell < 2) throw std::invalid_argument("Character: ell must be >= 2");
    if (ell > 64) throw std::invalid_argument("Character: ell must be <= 64");
    const u64 p = field_.p();
    d_ = std::gcd(ell, p - 1);
    exponent_ = (p - 1) / d_;
    const u64 step = pow_mod(field_.generator(), exponent_, p);
    match_.resize(d_);
    u64 cur = 1;
    for (u64 k = 0; k < d_; ++k) {
      match_[k] = cur;
      cur = mul_mod(cur, step, p);
    }
    if (mode == CharMode::table && p > kCharTableLimit) {
      throw std::invalid_argument("Character: table mode requires p <= 2^24");
    }
    if (mode == CharMode::table || (mode == CharMode::automatic && p <= kCharTableLimit)) {
      build_table();
    }
  }

  const FieldSpec& field() const noexcept { return field_; }
  u64 p() const noexcept { return field_.p(); }
  u64 ell() const noexcept { return ell_; }
  /// Effective order gcd(ell, p-1).
  u64 order() const noexcept { return d_; }
  u64 exponent() const noexcept { return exponent_; }
  const std::vector<u64>& match_table() const noexcept { return match_; }
  bool has_table() const noexcept { return static_cast<bool>(table_); }

  CharValue operator()(u64 x) const {
    const u64 p = field_.p();
    x %= p;
    if (x == 0) return CharValue::zero();
    if (table_) return CharValue::unity((*table_)[x]);
    const u64 t = pow_mod(x, exponent_, p);
    if (d_ == 1) return CharValue::unity(0);
    if (d_ == 2) return CharValue::unity(t == 1 ? 0 : 1);
    for (u64 k = 0; k < d_; ++k) {
      if (match_[k] == t) return CharValue::unity(static_cast<std::uint32_t>(k));
    }
    throw std::logic_error("Character: x^((p-1)/d) matched no d-th root of unity");
  }

 private:
  void build_table() {
    const u64 p = field_.p();
    auto table = std::make_shared<std::vector<std::uint8_t>>(p, 0);
    const u64 g = field_.generator();
    u64 cur = 1;
    // Walking g^k visits every nonzero element once; chi(g^k) = zeta_d^(k mod d).
    for (u64 k = 0; k + 1 < p; ++k) {
      (*table)[cur] = static_cast<std::uint8_t>(k % d_);
      cur = mul_mod(cur, g, p);
    }
    table_ = std::move(table);
  }

  FieldSpec field_;
  u64 ell_;
  u64 d_ = 1;
  u64 exponent_ = 1;
  std::vector<u64> match_;
  std::shared_ptr<const std::vector<std::uint8_t>> table_;
};

inline CharValue char_value(const Character& chi, u64 x) { return chi(x); }

/// Legendre symbol via Euler's criterion.
inline int legendre(u64 a, u64 p) {
  if (p < 3 || p % 2 == 0) throw std::invalid_argument("legendre: p must be an odd prime");
  a %= p;
  if (a == 0) return 0;
  return pow_mod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

}  // namespace curvestat
