#pragma once

// Brute-force reference computations used by the unit tests. Everything
// here is deliberately naive: exhaustive loops, trial division, repeated
// multiplication.

#include <cstdint>
#include <map>
#include <vector>

#include "curvestat/acceptance.hpp"
#include "curvestat/ffield.hpp"
#include "curvestat/polyff.hpp"
#include "curvestat/rng.hpp"

namespace oracles {

using curvestat::i64;
using curvestat::Poly;
using curvestat::u64;

inline bool is_prime_trial(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline u64 pow_slow(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  for (u64 i = 0; i < e; ++i) r = static_cast<u64>(static_cast<unsigned __int128>(r) * a % p);
  return r;
}

inline u64 order_slow(u64 a, u64 p) {
  u64 x = a % p;
  u64 k = 1;
  while (x != 1) {
    x = x * a % p;
    ++k;
  }
  return k;
}

/// Discrete log of x to base g by walking powers.
inline u64 dlog_slow(u64 x, u64 g, u64 p) {
  u64 cur = 1;
  for (u64 k = 0; k + 1 < p; ++k) {
    if (cur == x) return k;
    cur = cur * g % p;
  }
  return ~u64{0};
}

/// #{y : y^e = v} for every v.
inline std::vector<u64> power_preimages(u64 p, u64 e) { return curvestat::acceptance::oracle::power_preimages(p, e); }

/// Values of P at every x in F_p.
inline std::vector<u64> values(const Poly& P) {
  std::vector<u64> v(P.modulus());
  for (u64 x = 0; x < P.modulus(); ++x) {
    u64 acc = 0;
    u64 xp = 1;
    for (u64 c : P.coeffs()) {
      acc = (acc + c * xp) % P.modulus();
      xp = xp * x % P.modulus();
    }
    v[x] = acc;
  }
  return v;
}

inline Poly mul_school(const Poly& a, const Poly& b) {
  const u64 p = a.modulus();
  if (a.is_zero() || b.is_zero()) return Poly::zero(p);
  std::vector<u64> c(a.coeffs().size() + b.coeffs().size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs().size(); ++j) c[i + j] = (c[i + j] + a.coeffs()[i] * b.coeffs()[j]) % p;
  }
  return Poly(c, p);
}

/// Irreducibility by trial division against every monic polynomial of
/// degree 1..deg/2 (small p and degree only).
inline bool irreducible_slow(const Poly& f) {
  const u64 p = f.modulus();
  const int n = f.degree();
  if (n <= 0) return false;
  for (int d = 1; 2 * d <= n; ++d) {
    u64 combos = 1;
    for (int i = 0; i < d; ++i) combos *= p;
    for (u64 code = 0; code < combos; ++code) {
      std::vector<u64> c(static_cast<std::size_t>(d) + 1, 0);
      u64 t = code;
      for (int i = 0; i < d; ++i) {
        c[static_cast<std::size_t>(i)] = t % p;
        t /= p;
      }
      c[static_cast<std::size_t>(d)] = 1;
      if (curvestat::poly::mod(f, Poly(c, p)).is_zero()) return false;
    }
  }
  return true;
}

inline Poly random_poly(curvestat::CounterStream& rng, u64 p, int min_deg, int max_deg) {
  return curvestat::acceptance::oracle::random_poly(rng, p, min_deg, max_deg);
}

/// Window count over (x0, x0 + I] by direct summation of exhaustive fibers.
inline std::vector<i64> window_counts_slow(const Poly& P, u64 ell, u64 x_start, u64 len, u64 I) {
  const auto pre = power_preimages(P.modulus(), ell);
  const auto v = values(P);
  std::vector<i64> out;
  for (u64 i = 0; i < len; ++i) {
    i64 s = 0;
    for (u64 x = x_start + i + 1; x <= x_start + i + I; ++x) s += static_cast<i64>(pre[v[x]]);
    out.push_back(s);
  }
  return out;
}

/// sum_a (Phi(a) - 1/cells)^2 in long double from raw counts.
inline long double discrepancy_slow(const std::vector<u64>& counts) {
  long double total = 0;
  for (u64 c : counts) total += static_cast<long double>(c);
  long double s = 0;
  for (u64 c : counts) {
    const long double d = static_cast<long double>(c) / total - 1.0L / static_cast<long double>(counts.size());
    s += d * d;
  }
  return s;
}

}  // namespace oracles
