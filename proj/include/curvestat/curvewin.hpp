#pragma once

/**
 * @file curvewin.hpp
 * @brief Sliding-window point counts on curves y^ell = P(x) over F_p.
 *
 * A window position x0 covers the x-coordinates x0 < x <= x0 + I and
 * counts every affine point above them (or, in the restricted variant,
 * only points whose y lies in a fixed interval). Windows never wrap
 * around p: a scan over x0 in [x_start, x_start + scan_len) needs
 * x_start + scan_len + I <= p.
 *
 * Counts are reduced modulo m into exact Histograms; discrepancy() is the
 * squared distance sum_a (Phi(a) - 1/m)^2 as an exact Rational.
 */

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "curvestat/errors.hpp"
#include "curvestat/ffield.hpp"
#include "curvestat/parallel.hpp"
#include "curvestat/polyff.hpp"
#include "curvestat/rational.hpp"

namespace curvestat {

/// Closed integer interval [lo, hi].
struct Interval {
  u64 lo = 0;
  u64 hi = 0;

  u64 size() const noexcept { return hi - lo + 1; }
  bool contains(u64 x) const noexcept { return x >= lo && x <= hi; }
  bool operator==(const Interval&) const = default;
};

/// The curve y^ell = P(x) with its character chi_ell.
class Curve {
 public:
  Curve(Poly P, Character chi) : P_(std::move(P)), chi_(std::move(chi)) {
    if (P_.modulus() != chi_.p()) throw std::invalid_argument("Curve: polynomial and character over different fields");
    if (P_.degree() < 1) throw std::invalid_argument("Curve: P must be nonconstant");
  }
  Curve(const FieldSpec& field, u64 ell, Poly P) : Curve(std::move(P), Character(field, ell)) {}

  const Poly& P() const noexcept { return P_; }
  const Character& chi() const noexcept { return chi_; }
  u64 ell() const noexcept { return chi_.ell(); }
  u64 p() const noexcept { return chi_.p(); }

 private:
  Poly P_;
  Character chi_;
};

/// #{y in F_p : y^ell = P(x)}: 1 on a root of P, d = gcd(ell, p-1) when
/// P(x) is a nonzero d-th power residue, 0 otherwise.
inline u64 fiber_count(const Curve& C, u64 x) {
  const u64 v = C.P()(x);
  if (v == 0) return 1;
  return C.chi()(v).index() == 0 ? C.chi().order() : 0;
}

/// Window positions x0 in [x_start, x_start + scan_len), window length I,
/// and the block length L used by theorem experiments (0 if unused).
struct ScanSpec {
  u64 x_start = 0;
  u64 scan_len = 0;
  u64 window = 0;
  u64 block = 0;

  void validate(u64 p) const {
    const u128 end = static_cast<u128>(x_start) + scan_len + window;
    if (end > p) {
      throw std::invalid_argument("ScanSpec: windows must stay inside [0, p-1] (x_start + scan_len + I <= p)");
    }
  }
};

namespace detail {

// sum_{x = x0 + offset}^{x0 + offset + I - 1} weight(x) for every x0 of the
// scan, each chunk seeding its first window directly and sliding after.
template <class Weight>
std::vector<i64> sliding_sums(const Weight& weight, u64 offset, const ScanSpec& spec, unsigned threads) {
  std::vector<i64> out(spec.scan_len, 0);
  parallel_chunks(spec.scan_len, threads, [&](std::size_t, Chunk chunk) {
    if (chunk.begin == chunk.end) return;
    const u64 x0 = spec.x_start + chunk.begin;
    i64 acc = 0;
    for (u64 x = x0 + offset; x < x0 + offset + spec.window; ++x) acc += weight(x);
    out[chunk.begin] = acc;
    for (std::size_t i = chunk.begin + 1; i < chunk.end; ++i) {
      if (spec.window > 0) {
        const u64 prev = spec.x_start + i - 1;
        acc += weight(prev + offset + spec.window) - weight(prev + offset);
      }
      out[i] = acc;
    }
  });
  return out;
}

}  // namespace detail

/// N_C(x0, I) for each scanned x0, by the update
/// N(x0+1) = N(x0) - fiber(x0+1) + fiber(x0+I+1).
inline std::vector<i64> window_counts(const Curve& C, const ScanSpec& spec, unsigned threads = 1) {
  spec.validate(C.p());
  return detail::sliding_sums([&](u64 x) { return static_cast<i64>(fiber_count(C, x)); }, 1, spec, threads);
}

/// Exact tallies over m^dims residue cells. Cell index of (a_1..a_k) is
/// a_1 + a_2 m + ... + a_k m^(k-1).
struct Histogram {
  u64 m = 1;
  unsigned dims = 1;
  std::vector<u64> counts;
  u64 total = 0;

  std::size_t cells() const noexcept { return counts.size(); }

  Rational phi(std::size_t cell) const {
    if (total == 0) throw std::domain_error("Histogram: empty histogram");
    return {static_cast<i128>(counts.at(cell)), static_cast<i128>(total)};
  }

  std::vector<u64> label(std::size_t cell) const {
    std::vector<u64> a(dims);
    for (unsigned l = 0; l < dims; ++l) {
      a[l] = cell % m;
      cell /= m;
    }
    return a;
  }

  Histogram& merge(const Histogram& o) {
    if (o.m != m || o.dims != dims) throw std::invalid_argument("Histogram: shape mismatch");
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
    total += o.total;
    return *this;
  }

  bool operator==(const Histogram&) const = default;
};

inline u64 floor_mod(i64 v, u64 m) {
  const i64 r = v % static_cast<i64>(m);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(m) : r);
}

inline Histogram residue_histogram(std::span<const i64> counts, u64 m) {
  if (m < 1) throw std::invalid_argument("residue_histogram: m must be >= 1");
  Histogram h{m, 1, std::vector<u64>(m, 0), 0};
  for (i64 c : counts) {
    ++h.counts[floor_mod(c, m)];
    ++h.total;
  }
  return h;
}

/// sum over cells of (Phi(cell) - 1/cells)^2, exactly.
inline Rational discrepancy(const Histogram& h) {
  if (h.total == 0) throw std::domain_error("discrepancy: empty histogram");
  const auto cells = static_cast<i128>(h.cells());
  const auto total = static_cast<i128>(h.total);
  i128 num = 0;
  for (u64 c : h.counts) {
    const i128 dev = cells * static_cast<i128>(c) - total;
    num += dev * dev;
  }
  return {num, cells * cells * total * total};
}

struct JointHistogram {
  Histogram hist;
  Rational discrepancy;
};

/// Joint residues (N_1(x0,I) mod m, ..., N_k(x0,I) mod m) at a common x0.
inline JointHistogram joint_histogram(const std::vector<Curve>& curves, const ScanSpec& spec, u64 m,
                                      unsigned threads = 1) {
  if (curves.empty()) throw std::invalid_argument("joint_histogram: no curves");
  if (m < 1) throw std::invalid_argument("joint_histogram: m must be >= 1");
  for (const auto& c : curves) {
    if (c.p() != curves.front().p() || c.ell() != curves.front().ell()) {
      throw std::invalid_argument("joint_histogram: curves must share the field and ell");
    }
  }
  std::vector<std::vector<i64>> counts;
  counts.reserve(curves.size());
  for (const auto& c : curves) counts.push_back(window_counts(c, spec, threads));
  std::size_t cells = 1;
  for (std::size_t l = 0; l < curves.size(); ++l) cells *= m;
  Histogram h{m, static_cast<unsigned>(curves.size()), std::vector<u64>(cells, 0), 0};
  for (std::size_t i = 0; i < spec.scan_len; ++i) {
    std::size_t cell = 0;
    std::size_t stride = 1;
    for (const auto& v : counts) {
      cell += floor_mod(v[i], m) * stride;
      stride *= m;
    }
    ++h.counts[cell];
    ++h.total;
  }
  Rational disc = discrepancy(h);
  return {std::move(h), disc};
}

/// Omega = x-interval times y-interval.
struct Rect {
  Interval x;
  Interval y;

  void validate(u64 p) const {
    if (x.lo > x.hi || y.lo > y.hi) throw std::invalid_argument("Rect: intervals must be nonempty");
    if (x.hi >= p || y.hi >= p) throw std::invalid_argument("Rect: intervals must lie in [0, p-1]");
  }
};

/// Multiset {y^ell : y in y-interval} keyed by field element, and the
/// membership indicator delta(x) = [x in x-interval and P(x) in the multiset].
class DeltaIndex {
 public:
  DeltaIndex(const Curve& C, const Rect& rect) : C_(C), rect_(rect) {
    const u64 p = C.p();
    rect.validate(p);
    dense_ = p <= (u64{1} << 26);
    if (dense_) dense_counts_.assign(p, 0);
    for (u64 y = rect.y.lo; y <= rect.y.hi; ++y) {
      const u64 v = pow_mod(y, C.ell(), p);
      if (dense_) {
        if (dense_counts_[v] < 255) ++dense_counts_[v];
      } else {
        ++sparse_counts_[v];
      }
    }
  }

  /// Number of y in the y-interval with y^ell = v.
  u64 preimages(u64 v) const {
    if (dense_) return dense_counts_[v];
    auto it = sparse_counts_.find(v);
    return it == sparse_counts_.end() ? 0 : it->second;
  }

  u64 hits(u64 x) const { return preimages(C_.P()(x)); }

  bool delta(u64 x) const { return rect_.x.contains(x) && hits(x) >= 1; }

  const Curve& curve() const noexcept { return C_; }
  const Rect& rect() const noexcept { return rect_; }

 private:
  Curve C_;
  Rect rect_;
  bool dense_ = false;
  std::vector<std::uint8_t> dense_counts_;
  std::unordered_map<u64, u64> sparse_counts_;
};

struct StarCheck {
  bool ok = true;
  std::optional<u64> witness;  // smallest x with two or more y
};

inline StarCheck condition_star(const DeltaIndex& index) {
  const Rect& r = index.rect();
  for (u64 x = r.x.lo; x <= r.x.hi; ++x) {
    if (index.hits(x) >= 2) return {false, x};
  }
  return {};
}

/// Every x in the x-interval has at most one y in the y-interval on C.
inline StarCheck condition_star(const Curve& C, const Rect& rect) { return condition_star(DeltaIndex(C, rect)); }

/// N_{C,Omega}(x0, I) = sum_{x0 < x <= x0 + I} delta(x). Refuses rectangles
/// violating condition (*).
inline std::vector<i64> restricted_window_counts(const Curve& C, const Rect& rect, const ScanSpec& spec,
                                                 unsigned threads = 1) {
  spec.validate(C.p());
  const DeltaIndex index(C, rect);
  if (auto star = condition_star(index); !star.ok) throw ConditionStarError(*star.witness);
  return detail::sliding_sums([&](u64 x) { return static_cast<i64>(index.delta(x)); }, 1, spec, threads);
}

/// beta = num/den with 0 < beta <= 1/2.
struct Beta {
  u64 num = 1;
  u64 den = 2;
};

struct BetaScan {
  u64 y_max = 0;  // J = (0, floor(beta p)]
  std::vector<i64> residues;
  std::vector<i64> nonresidues;
  Histogram residue_hist;
  Histogram nonresidue_hist;
};

/// R_beta(x0, I) and N_beta(x0, I): beta-quadratic residues and
/// nonresidues in [x0, x0 + I), i.e. x = y^2 with y in (0, floor(beta p)].
inline BetaScan beta_residue_scan(const FieldSpec& field, Beta beta, const ScanSpec& spec, u64 m,
                                  unsigned threads = 1) {
  const u64 p = field.p();
  if (beta.den == 0 || beta.num == 0 || static_cast<u128>(2) * beta.num > beta.den) {
    throw std::invalid_argument("beta_residue_scan: beta must lie in (0, 1/2]");
  }
  const u64 y_max = static_cast<u64>(static_cast<u128>(beta.num) * p / beta.den);
  if (y_max < 1) throw std::invalid_argument("beta_residue_scan: beta * p must be >= 1");
  spec.validate(p);
  const Curve C(field, 2, Poly::x(p));
  const Rect rect{{0, p - 1}, {1, y_max}};
  const DeltaIndex index(C, rect);
  if (auto star = condition_star(index); !star.ok) throw ConditionStarError(*star.witness);
  BetaScan out;
  out.y_max = y_max;
  out.residues = detail::sliding_sums([&](u64 x) { return static_cast<i64>(index.delta(x)); }, 0, spec, threads);
  out.nonresidues.reserve(out.residues.size());
  for (i64 r : out.residues) out.nonresidues.push_back(static_cast<i64>(spec.window) - r);
  out.residue_hist = residue_histogram(out.residues, m);
  out.nonresidue_hist = residue_histogram(out.nonresidues, m);
  return out;
}

struct GaussCheck {
  u64 r = 0;
  bool ok = false;
};

/// r = #{x in [1, (p-1)/2] : (a x mod p) > p/2}; ok iff (-1)^r = (a/p).
inline GaussCheck gauss_lemma_check(u64 a, u64 p) {
  if (p < 3 || !is_prime(p)) throw std::invalid_argument("gauss_lemma_check: p must be an odd prime");
  if (a % p == 0) throw std::invalid_argument("gauss_lemma_check: a must be coprime to p");
  GaussCheck g;
  for (u64 x = 1; x <= (p - 1) / 2; ++x) {
    if (2 * mul_mod(a % p, x, p) > p) ++g.r;
  }
  g.ok = (g.r % 2 == 0 ? 1 : -1) == legendre(a, p);
  return g;
}

/// Number of x0 in [0, p-1-window] such that no x in [x0, x0 + window)
/// has chi_ell(x) = zeta^mu.
inline u64 cor4_exceptional(const Character& chi, u64 window, std::uint32_t mu) {
  const u64 p = chi.p();
  if (chi.order() != chi.ell()) throw HypothesisError({"p ≡ 1 (mod ℓ)"});
  if (window == 0) throw std::invalid_argument("cor4_exceptional: window must be >= 1");
  if (window > p - 1) return 0;
  u64 exceptional = 0;
  std::optional<u64> last;
  for (u64 x = 0; x < p; ++x) {
    const CharValue v = chi(x);
    if (!v.is_zero() && v.index() == mu) last = x;
    if (x + 1 >= window) {
      const u64 x0 = x + 1 - window;
      if (x0 > p - 1 - window) break;
      if (!last || *last < x0) ++exceptional;
    }
  }
  return exceptional;
}

inline u64 cor4_exceptional(const FieldSpec& field, u64 ell, u64 window, std::uint32_t mu) {
  return cor4_exceptional(Character(field, ell), window, mu);
}

}  // namespace curvestat
