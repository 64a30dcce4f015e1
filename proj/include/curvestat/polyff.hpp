#pragma once

/**
 * @file polyff.hpp
 * @brief Dense univariate polynomials over F_p.
 *
 * Covers the polynomial side of the curve statistics: evaluation,
 * factorization into monic irreducibles, complete-power and admissibility
 * predicates, shifted products prod_j P(a x + b_j)^{e_j}, and the
 * multiplicative-independence test for polynomial families.
 *
 * Factorization is the textbook pipeline: square-free decomposition,
 * distinct-degree splitting, then Cantor-Zassenhaus equal-degree splitting
 * driven by an explicit seed.
 */

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "curvestat/errors.hpp"
#include "curvestat/ffield.hpp"
#include "curvestat/rational.hpp"
#include "curvestat/rng.hpp"

namespace curvestat {

class Poly {
 public:
  Poly() = default;

  /// Coefficients constant term first; reduced mod p and trimmed.
  Poly(std::vector<u64> coeffs, u64 p) : c_(std::move(coeffs)), p_(p) {
    if (p < 2) throw std::invalid_argument("Poly: modulus must be >= 2");
    for (auto& v : c_) v %= p_;
    trim();
  }

  /// Signed coefficients, reduced into [0, p).
  static Poly from_signed(const std::vector<i64>& coeffs, u64 p) {
    std::vector<u64> c;
    c.reserve(coeffs.size());
    for (i64 v : coeffs) {
      const i64 r = v % static_cast<i64>(p);
      c.push_back(static_cast<u64>(r < 0 ? r + static_cast<i64>(p) : r));
    }
    return {std::move(c), p};
  }

  static Poly zero(u64 p) { return {{}, p}; }
  static Poly constant(u64 c, u64 p) { return {{c}, p}; }
  static Poly x(u64 p) { return {{0, 1}, p}; }

  u64 modulus() const noexcept { return p_; }
  const std::vector<u64>& coeffs() const noexcept { return c_; }
  bool is_zero() const noexcept { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  u64 leading() const noexcept { return c_.empty() ? 0 : c_.back(); }
  u64 coeff(std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }
  bool is_constant() const noexcept { return c_.size() <= 1; }
  bool is_one() const noexcept { return c_.size() == 1 && c_[0] == 1; }

  /// Horner evaluation.
  u64 operator()(u64 x) const {
    x %= p_;
    u64 acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = add_mod(mul_mod(acc, x, p_), *it, p_);
    return acc;
  }

  bool operator==(const Poly& o) const noexcept { return p_ == o.p_ && c_ == o.c_; }
  auto operator<=>(const Poly& o) const noexcept {
    if (auto c = degree() <=> o.degree(); c != 0) return c;
    return c_ <=> o.c_;
  }

  std::string str() const {
    if (c_.empty()) return "0";
    std::string s;
    for (int i = degree(); i >= 0; --i) {
      const u64 v = c_[static_cast<std::size_t>(i)];
      if (v == 0) continue;
      if (!s.empty()) s += " + ";
      if (i == 0 || v != 1) s += std::to_string(v);
      if (i >= 1) s += "x";
      if (i >= 2) s += "^" + std::to_string(i);
    }
    return s;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<u64> c_;
  u64 p_ = 2;
};

inline u64 eval(const Poly& P, u64 x) { return P(x); }

namespace poly {

inline void check_same_field(const Poly& a, const Poly& b) {
  if (a.modulus() != b.modulus()) throw std::invalid_argument("Poly: mismatched moduli");
}

inline Poly add(const Poly& a, const Poly& b) {
  check_same_field(a, b);
  const u64 p = a.modulus();
  std::vector<u64> c(std::max(a.coeffs().size(), b.coeffs().size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = add_mod(a.coeff(i), b.coeff(i), p);
  return {std::move(c), p};
}

inline Poly sub(const Poly& a, const Poly& b) {
  check_same_field(a, b);
  const u64 p = a.modulus();
  std::vector<u64> c(std::max(a.coeffs().size(), b.coeffs().size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = sub_mod(a.coeff(i), b.coeff(i), p);
  return {std::move(c), p};
}

inline Poly scale(const Poly& a, u64 s) {
  const u64 p = a.modulus();
  std::vector<u64> c = a.coeffs();
  for (auto& v : c) v = mul_mod(v, s % p, p);
  return {std::move(c), p};
}

inline Poly mul(const Poly& a, const Poly& b) {
  check_same_field(a, b);
  const u64 p = a.modulus();
  if (a.is_zero() || b.is_zero()) return Poly::zero(p);
  const auto& x = a.coeffs();
  const auto& y = b.coeffs();
  std::vector<u64> c(x.size() + y.size() - 1, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      c[i + j] = add_mod(c[i + j], mul_mod(x[i], y[j], p), p);
    }
  }
  return {std::move(c), p};
}

inline Poly monic(const Poly& a) {
  if (a.is_zero()) return a;
  return scale(a, inv_mod(a.leading(), a.modulus()));
}

/// Euclidean division a = q*b + r, deg r < deg b.
inline std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  check_same_field(a, b);
  if (b.is_zero()) throw std::domain_error("Poly: division by zero polynomial");
  const u64 p = a.modulus();
  if (a.degree() < b.degree()) return {Poly::zero(p), a};
  std::vector<u64> r = a.coeffs();
  const auto& d = b.coeffs();
  const std::size_t db = d.size() - 1;
  const u64 inv_lead = inv_mod(b.leading(), p);
  std::vector<u64> q(r.size() - db, 0);
  for (std::size_t i = r.size(); i-- > db;) {
    const u64 coef = mul_mod(r[i], inv_lead, p);
    q[i - db] = coef;
    if (coef == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) {
      r[i - db + j] = sub_mod(r[i - db + j], mul_mod(coef, d[j], p), p);
    }
  }
  r.resize(db);
  return {Poly(std::move(q), p), Poly(std::move(r), p)};
}

inline Poly mod(const Poly& a, const Poly& b) { return divmod(a, b).second; }

/// Exact quotient; throws if b does not divide a.
inline Poly exact_div(const Poly& a, const Poly& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) throw std::logic_error("Poly: inexact division");
  return q;
}

/// Monic gcd (zero if both inputs are zero).
inline Poly gcd(Poly a, Poly b) {
  check_same_field(a, b);
  while (!b.is_zero()) {
    Poly r = mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

inline Poly derivative(const Poly& a) {
  const u64 p = a.modulus();
  if (a.degree() < 1) return Poly::zero(p);
  std::vector<u64> c(a.coeffs().size() - 1);
  for (std::size_t i = 1; i < a.coeffs().size(); ++i) c[i - 1] = mul_mod(a.coeffs()[i], i % p, p);
  return {std::move(c), p};
}

inline Poly mulmod(const Poly& a, const Poly& b, const Poly& f) { return mod(mul(a, b), f); }

/// base^e mod f.
inline Poly powmod(Poly base, u64 e, const Poly& f) {
  const u64 p = f.modulus();
  Poly result = mod(Poly::constant(1, p), f);
  base = mod(base, f);
  while (e > 0) {
    if (e & 1U) result = mulmod(result, base, f);
    base = mulmod(base, base, f);
    e >>= 1U;
  }
  return result;
}

inline Poly pow(Poly base, u64 e) {
  Poly result = Poly::constant(1, base.modulus());
  while (e > 0) {
    if (e & 1U) result = mul(result, base);
    e >>= 1U;
    if (e) base = mul(base, base);
  }
  return result;
}

/// P(a x + b) by Horner's rule on polynomials.
inline Poly compose_affine(const Poly& P, u64 a, u64 b) {
  const u64 p = P.modulus();
  const Poly lin({b % p, a % p}, p);
  Poly acc = Poly::zero(p);
  for (auto it = P.coeffs().rbegin(); it != P.coeffs().rend(); ++it) {
    acc = add(mul(acc, lin), Poly::constant(*it, p));
  }
  return acc;
}

}  // namespace poly

struct Factor {
  Poly poly;  // monic irreducible
  int multiplicity;
  bool operator==(const Factor&) const = default;
};

/// unit * prod factor^multiplicity, factors sorted by (degree, coefficients).
struct Factorization {
  u64 unit = 0;
  std::vector<Factor> factors;

  Poly expand(u64 p) const {
    Poly acc = Poly::constant(unit, p);
    for (const auto& f : factors) acc = poly::mul(acc, poly::pow(f.poly, static_cast<u64>(f.multiplicity)));
    return acc;
  }
};

namespace detail {

// Square-free decomposition of a monic polynomial: pairs (g_i, i) with
// f = prod g_i^i and each g_i square-free. Handles characteristic p by
// taking p-th roots when the derivative vanishes.
inline std::vector<std::pair<Poly, int>> squarefree_parts(const Poly& f) {
  const u64 p = f.modulus();
  std::vector<std::pair<Poly, int>> out;
  if (f.degree() < 1) return out;
  Poly c = poly::gcd(f, poly::derivative(f));
  Poly w = poly::exact_div(f, c);
  int i = 1;
  while (!w.is_one()) {
    Poly y = poly::gcd(w, c);
    Poly fac = poly::exact_div(w, y);
    if (fac.degree() > 0) out.emplace_back(fac, i);
    w = std::move(y);
    c = poly::exact_div(c, w);
    ++i;
  }
  if (!c.is_one()) {
    // c is a polynomial in x^p; a^p = a in F_p so the p-th root just
    // takes every p-th coefficient.
    std::vector<u64> root;
    for (std::size_t k = 0; k < c.coeffs().size(); k += p) root.push_back(c.coeffs()[k]);
    for (auto& [g, j] : squarefree_parts(Poly(std::move(root), p))) {
      out.emplace_back(std::move(g), j * static_cast<int>(p));
    }
  }
  return out;
}

// Distinct-degree factorization of a square-free monic polynomial: pairs
// (g, d) where g is the product of all irreducible factors of degree d.
inline std::vector<std::pair<Poly, int>> distinct_degree(Poly f) {
  const u64 p = f.modulus();
  std::vector<std::pair<Poly, int>> out;
  const Poly x = Poly::x(p);
  Poly h = poly::mod(x, f);
  for (int d = 1; f.degree() >= 2 * d; ++d) {
    h = poly::powmod(h, p, f);
    Poly g = poly::gcd(poly::sub(h, x), f);
    if (!g.is_one()) {
      out.emplace_back(g, d);
      f = poly::exact_div(f, g);
      h = poly::mod(h, f);
    }
  }
  if (f.degree() > 0) out.emplace_back(f, f.degree());
  return out;
}

// Cantor-Zassenhaus splitting of a monic product of distinct degree-d
// irreducibles (odd p).
inline void equal_degree(const Poly& f, int d, CounterStream& rng, std::vector<Poly>& out) {
  if (f.degree() == d) {
    out.push_back(f);
    return;
  }
  const u64 p = f.modulus();
  const auto n = static_cast<std::size_t>(f.degree());
  for (;;) {
    std::vector<u64> c(n);
    for (auto& v : c) v = rng.below(p);
    Poly a(std::move(c), p);
    if (a.degree() < 1) continue;
    Poly g = poly::gcd(a, f);
    if (g.degree() > 0 && g.degree() < f.degree()) {
      equal_degree(g, d, rng, out);
      equal_degree(poly::exact_div(f, g), d, rng, out);
      return;
    }
    // a^((p^d - 1)/2) = (a^(1 + p + ... + p^(d-1)))^((p-1)/2)
    Poly frob = a;
    Poly norm = a;
    for (int i = 1; i < d; ++i) {
      frob = poly::powmod(frob, p, f);
      norm = poly::mulmod(norm, frob, f);
    }
    Poly b = poly::powmod(norm, (p - 1) / 2, f);
    g = poly::gcd(poly::sub(b, Poly::constant(1, p)), f);
    if (g.degree() > 0 && g.degree() < f.degree()) {
      equal_degree(g, d, rng, out);
      equal_degree(poly::exact_div(f, g), d, rng, out);
      return;
    }
  }
}

}  // namespace detail

/// Factor a nonzero polynomial over F_p (p odd) into monic irreducibles.
inline Factorization factor(const Poly& P, u64 seed = 0) {
  if (P.is_zero()) throw std::invalid_argument("factor: zero polynomial");
  const u64 p = P.modulus();
  if (p % 2 == 0) throw std::invalid_argument("factor: odd characteristic required");
  Factorization out;
  out.unit = P.leading();
  if (P.degree() == 0) return out;
  CounterStream rng(seed, 0);
  std::map<Poly, int> acc;
  for (const auto& [sf, mult] : detail::squarefree_parts(poly::monic(P))) {
    for (const auto& [block, d] : detail::distinct_degree(sf)) {
      std::vector<Poly> irreducibles;
      detail::equal_degree(block, d, rng, irreducibles);
      for (auto& g : irreducibles) acc[g] += mult;
    }
  }
  for (auto& [g, m] : acc) out.factors.push_back({g, m});
  return out;
}

/// True iff P = R^e for some R in F_p[x].
inline bool is_complete_power(const Poly& P, u64 e) {
  if (P.is_zero()) throw std::invalid_argument("is_complete_power: zero polynomial");
  if (e < 2) throw std::invalid_argument("is_complete_power: exponent must be >= 2");
  const u64 p = P.modulus();
  const Factorization f = factor(P);
  for (const auto& fac : f.factors) {
    if (static_cast<u64>(fac.multiplicity) % e != 0) return false;
  }
  return pow_mod(f.unit, (p - 1) / std::gcd(e, p - 1), p) == 1;
}

namespace detail {

inline std::vector<u64> prime_divisors(u64 n) {
  std::vector<u64> out;
  if (n < 2) return out;
  for (const auto& [q, e] : factorize(n)) out.push_back(q);
  return out;
}

inline u64 multiplicity_gcd(const Poly& P) {
  u64 g = 0;
  for (const auto& fac : factor(P).factors) g = std::gcd(g, static_cast<u64>(fac.multiplicity));
  return g;
}

}  // namespace detail

/// Not a complete q-th power for any prime q coprime to ell. Only primes
/// dividing the gcd of the multiplicities can be obstructions.
inline bool admissible(const Poly& P, u64 ell) {
  if (P.degree() < 1) throw std::invalid_argument("admissible: P must be nonconstant");
  for (u64 q : detail::prime_divisors(detail::multiplicity_gcd(P))) {
    if (std::gcd(q, ell) == 1 && is_complete_power(P, q)) return false;
  }
  return true;
}

/// Not a complete q-th power for any prime q dividing ell. This is what
/// makes chi_ell(P(x)) a nontrivial character sum for every power 1..ell-1;
/// the theorem drivers check it next to admissible().
inline bool nondegenerate(const Poly& P, u64 ell) {
  if (P.degree() < 1) throw std::invalid_argument("nondegenerate: P must be nonconstant");
  for (u64 q : detail::prime_divisors(ell)) {
    if (is_complete_power(P, q)) return false;
  }
  return true;
}

/// Q(x) = prod_j P(a x + b_j)^{e_j}.
inline Poly shift_combination(const Poly& P, u64 a, const std::vector<u64>& b, const std::vector<u64>& e) {
  const u64 p = P.modulus();
  if (a % p == 0) throw std::invalid_argument("shift_combination: a must be nonzero");
  if (b.size() != e.size()) throw std::invalid_argument("shift_combination: b and e lengths differ");
  std::vector<u64> sorted;
  for (u64 v : b) sorted.push_back(v % p);
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("shift_combination: b entries must be pairwise distinct");
  }
  if (std::all_of(e.begin(), e.end(), [](u64 v) { return v == 0; })) {
    throw std::invalid_argument("shift_combination: exponent vector must be nonzero");
  }
  Poly acc = Poly::constant(1, p);
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (e[j] == 0) continue;
    acc = poly::mul(acc, poly::pow(poly::compose_affine(P, a, b[j]), e[j]));
  }
  return acc;
}

struct IndependenceResult {
  bool independent = true;
  /// Primitive integer kernel vector when dependent (first nonzero entry positive).
  std::vector<i64> witness;
};

/// Decides multiplicative independence of nonconstant polynomials.
///
/// prod P_i^{e_i} is a nonzero constant c iff e is in the left kernel of
/// the exponent matrix over the union of monic irreducible factors; then
/// (p-1)e gives exactly 1, so dependence reduces to rank deficiency over Q.
inline IndependenceResult multiplicatively_independent(const std::vector<Poly>& Ps) {
  if (Ps.empty()) throw std::invalid_argument("multiplicatively_independent: empty family");
  const u64 p = Ps.front().modulus();
  std::map<Poly, std::size_t> column;
  std::vector<Factorization> facs;
  for (const auto& P : Ps) {
    if (P.is_zero()) throw std::invalid_argument("multiplicatively_independent: zero polynomial");
    if (P.degree() < 1) throw std::invalid_argument("multiplicatively_independent: constant polynomial");
    if (P.modulus() != p) throw std::invalid_argument("multiplicatively_independent: mixed moduli");
    facs.push_back(factor(P));
    for (const auto& f : facs.back().factors) column.emplace(f.poly, column.size());
  }
  const std::size_t k = Ps.size();
  const std::size_t n = column.size();
  // A = M^T (n x k); kernel of A is the left kernel of M.
  std::vector<std::vector<Rational>> A(n, std::vector<Rational>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (const auto& f : facs[i].factors) A[column.at(f.poly)][i] = Rational(f.multiplicity);
  }
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < k && row < n; ++col) {
    std::size_t sel = row;
    while (sel < n && A[sel][col] == Rational(0)) ++sel;
    if (sel == n) continue;
    std::swap(A[sel], A[row]);
    const Rational piv = A[row][col];
    for (auto& v : A[row]) v = v / piv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == row || A[r][col] == Rational(0)) continue;
      const Rational f = A[r][col];
      for (std::size_t c = 0; c < k; ++c) A[r][c] -= f * A[row][c];
    }
    pivot_col.push_back(col);
    ++row;
  }
  IndependenceResult res;
  if (pivot_col.size() == k) return res;
  std::size_t free_col = 0;
  while (std::find(pivot_col.begin(), pivot_col.end(), free_col) != pivot_col.end()) ++free_col;
  std::vector<Rational> e(k, Rational(0));
  e[free_col] = Rational(1);
  for (std::size_t r = 0; r < pivot_col.size(); ++r) e[pivot_col[r]] = Rational(0) - A[r][free_col];
  i128 lcm = 1;
  for (const auto& v : e) lcm = lcm / gcd128(lcm, v.den()) * v.den();
  std::vector<i128> ints;
  i128 g = 0;
  for (const auto& v : e) {
    ints.push_back(v.num() * (lcm / v.den()));
    g = gcd128(g, ints.back());
  }
  i128 sign = 1;
  for (i128 v : ints) {
    if (v != 0) {
      sign = v < 0 ? -1 : 1;
      break;
    }
  }
  res.independent = false;
  for (i128 v : ints) res.witness.push_back(static_cast<i64>(v / g * sign));
  return res;
}

}  // namespace curvestat
