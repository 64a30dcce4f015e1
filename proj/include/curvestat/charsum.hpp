#pragma once

/**
 * @file charsum.hpp
 * @brief Multiplicative character sums and the stride censuses built on them.
 *
 * Sums are kept as CharSumTally: how many terms landed on each unity index
 * zeta_d^j, plus how many arguments were 0 (chi(0) = 0). The complex value
 * is only formed by magnitude().
 *
 * All "log p" in the bounds below is the natural logarithm.
 */

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "curvestat/curvewin.hpp"
#include "curvestat/errors.hpp"
#include "curvestat/ffield.hpp"
#include "curvestat/parallel.hpp"
#include "curvestat/polyff.hpp"

namespace curvestat {

struct CharSumTally {
  std::vector<u64> counts;  // one per unity index
  u64 zero_count = 0;

  explicit CharSumTally(u64 d = 1) : counts(d, 0) {}

  u64 terms() const { return std::accumulate(counts.begin(), counts.end(), zero_count); }

  std::complex<double> value() const {
    const double d = static_cast<double>(counts.size());
    std::complex<double> s{0.0, 0.0};
    for (std::size_t j = 0; j < counts.size(); ++j) {
      const double ang = 2.0 * std::numbers::pi * static_cast<double>(j) / d;
      s += static_cast<double>(counts[j]) * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return s;
  }

  double magnitude() const {
    // Exact shortcuts for real characters.
    if (counts.size() == 1) return static_cast<double>(counts[0]);
    if (counts.size() == 2) {
      return std::fabs(static_cast<double>(counts[0]) - static_cast<double>(counts[1]));
    }
    return std::abs(value());
  }

  CharSumTally& merge(const CharSumTally& o) {
    if (o.counts.size() != counts.size()) throw std::invalid_argument("CharSumTally: order mismatch");
    for (std::size_t j = 0; j < counts.size(); ++j) counts[j] += o.counts[j];
    zero_count += o.zero_count;
    return *this;
  }

  bool operator==(const CharSumTally&) const = default;
};

/// S(P) = sum_{x in interval} chi(P(x)).
inline CharSumTally incomplete_sum(const Poly& P, const Character& chi, Interval interval, unsigned threads = 1) {
  const u64 p = chi.p();
  if (P.modulus() != p) throw std::invalid_argument("incomplete_sum: field mismatch");
  if (interval.hi >= p) throw std::invalid_argument("incomplete_sum: interval must lie in [0, p-1]");
  const u64 d = chi.order();
  if (interval.lo > interval.hi) return CharSumTally(d);
  const u64 n = interval.size();
  std::vector<CharSumTally> parts(std::max(1U, threads), CharSumTally(d));
  parallel_chunks(n, threads, [&](std::size_t k, Chunk c) {
    auto& t = parts[k];
    for (std::size_t i = c.begin; i < c.end; ++i) {
      const CharValue v = chi(P(interval.lo + i));
      if (v.is_zero()) {
        ++t.zero_count;
      } else {
        ++t.counts[v.index()];
      }
    }
  });
  CharSumTally total(d);
  for (const auto& t : parts) total.merge(t);
  return total;
}

struct WeilCheck {
  double magnitude = 0;
  double bound = 0;
  bool pass = false;
};

namespace detail {

inline void require_not_power(const Poly& P, const Character& chi) {
  if (P.is_zero()) throw std::invalid_argument("weil_check: zero polynomial");
  if (chi.order() >= 2 && is_complete_power(P, chi.order())) {
    throw HypothesisError({"P not a complete ℓ-th power"},
                          "P = " + P.str() + " is a complete " + std::to_string(chi.order()) + "-th power");
  }
}

}  // namespace detail

/// |S_I(P)| <= 2 (deg P + 1) sqrt(p) log p.
inline WeilCheck weil_check(const Poly& P, const Character& chi, Interval interval, unsigned threads = 1) {
  detail::require_not_power(P, chi);
  WeilCheck w;
  w.magnitude = incomplete_sum(P, chi, interval, threads).magnitude();
  const double p = static_cast<double>(chi.p());
  w.bound = 2.0 * (P.degree() + 1) * std::sqrt(p) * std::log(p);
  w.pass = w.magnitude <= w.bound;
  return w;
}

/// |sum_{x in F_p} chi(P(x)) e_p(-t x)|.
inline double twisted_complete_sum(const Poly& P, const Character& chi, u64 t, unsigned threads = 1) {
  const u64 p = chi.p();
  const u64 d = chi.order();
  std::vector<std::complex<double>> roots(d);
  for (u64 j = 0; j < d; ++j) {
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(d);
    roots[j] = {std::cos(ang), std::sin(ang)};
  }
  // Fixed block partition, summed in block order.
  constexpr unsigned kBlocks = 64;
  std::vector<std::complex<double>> parts(kBlocks, {0.0, 0.0});
  parallel_blocks(p, kBlocks, threads, [&](std::size_t k, Chunk c) {
    std::complex<double> s{0.0, 0.0};
    for (std::size_t x = c.begin; x < c.end; ++x) {
      const CharValue v = chi(P(x));
      if (v.is_zero()) continue;
      const u64 phase = mul_mod(t % p, x, p);
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(phase) / static_cast<double>(p);
      s += roots[v.index()] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    parts[k] = s;
  });
  std::complex<double> total{0.0, 0.0};
  for (const auto& s : parts) total += s;
  return std::abs(total);
}

/// Complete twisted sum against (deg P + 1) sqrt(p).
inline WeilCheck twisted_weil_check(const Poly& P, const Character& chi, u64 t, unsigned threads = 1) {
  detail::require_not_power(P, chi);
  WeilCheck w;
  w.magnitude = twisted_complete_sum(P, chi, t, threads);
  w.bound = (P.degree() + 1) * std::sqrt(static_cast<double>(chi.p()));
  w.pass = w.magnitude <= w.bound + 1e-9 * w.bound;
  return w;
}

/// Stride census: #{0 <= i <= N : chi(P_l(i L + x_j)) = zeta^{v_{l,j}} for all l, j}.
struct CensusSpec {
  std::vector<Poly> polys;                       // P_1..P_k
  u64 stride = 1;                                // L
  std::vector<u64> offsets;                      // x_1..x_r, pairwise distinct
  u64 N = 0;                                     // i ranges over [0, N]
  std::vector<std::vector<std::uint32_t>> targets;  // k vectors of r unity indices
  bool theorem_mode = false;
};

struct CensusResult {
  u64 count = 0;
  Rational prediction;      // N / d^(k r)
  double residual = 0;      // |count - prediction|
  double main_bound = 0;    // (2 (D k r (ell-1) + 1) / ell^(k r)) sqrt(p) log p
  double slack = 0;         // D r, standing in for the O(d) term
  bool main_bound_ok = false;
  bool bound_ok = false;
};

namespace detail {

inline u64 total_degree(const std::vector<Poly>& Ps) {
  u64 s = 0;
  for (const auto& P : Ps) s += static_cast<u64>(std::max(P.degree(), 0));
  return s;
}

inline CensusResult census_impl(const CensusSpec& spec, const Character& chi, unsigned threads) {
  const u64 p = chi.p();
  const std::size_t k = spec.polys.size();
  const std::size_t r = spec.offsets.size();
  if (k == 0) throw std::invalid_argument("census: no polynomials");
  if (r == 0) throw std::invalid_argument("census: no offsets");
  if (spec.targets.size() != k) throw std::invalid_argument("census: need one target vector per polynomial");
  for (const auto& v : spec.targets) {
    if (v.size() != r) throw std::invalid_argument("census: target vector length must equal number of offsets");
  }
  std::vector<u64> sorted;
  for (u64 x : spec.offsets) sorted.push_back(x % p);
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("census: offsets must be pairwise distinct");
  }
  for (const auto& P : spec.polys) {
    if (P.modulus() != p) throw std::invalid_argument("census: field mismatch");
    if (P.degree() < 1) throw std::invalid_argument("census: polynomials must be nonconstant");
  }
  const u64 D = total_degree(spec.polys);
  const double logp = std::log(static_cast<double>(p));
  if (spec.theorem_mode) {
    std::vector<std::string> failed;
    if (!(static_cast<double>(r) < logp / std::log(4.0 * static_cast<double>(D)))) {
      failed.emplace_back("r < log p / log(4d)");
    }
    for (const auto& P : spec.polys) {
      if (!admissible(P, chi.ell()) || !nondegenerate(P, chi.ell())) {
        failed.emplace_back("P admissible and not a complete ℓ-th power");
        break;
      }
    }
    if (!failed.empty()) throw HypothesisError(failed);
  }
  const u64 d = chi.order();
  bool reachable = true;
  for (const auto& v : spec.targets) {
    for (auto j : v) reachable = reachable && j < d;
  }

  CensusResult res;
  if (reachable) {
    const u64 n = spec.N + 1;
    std::vector<u64> partial(std::max(1U, threads), 0);
    parallel_chunks(n, threads, [&](std::size_t part, Chunk c) {
      u64 hits = 0;
      for (std::size_t i = c.begin; i < c.end; ++i) {
        const u64 base = mul_mod(i % p, spec.stride % p, p);
        bool ok = true;
        for (std::size_t l = 0; l < k && ok; ++l) {
          for (std::size_t j = 0; j < r && ok; ++j) {
            const CharValue v = chi(spec.polys[l](add_mod(base, spec.offsets[j] % p, p)));
            ok = !v.is_zero() && v.index() == spec.targets[l][j];
          }
        }
        hits += ok ? 1 : 0;
      }
      partial[part] = hits;
    });
    for (u64 h : partial) res.count += h;
  }
  i128 dkr = 1;
  for (std::size_t i = 0; i < k * r; ++i) dkr *= static_cast<i128>(d);
  res.prediction = Rational(static_cast<i128>(spec.N), dkr);
  res.residual = std::fabs(static_cast<double>(res.count) - res.prediction.to_double());
  const double ell = static_cast<double>(chi.ell());
  const double kr = static_cast<double>(k * r);
  res.main_bound = 2.0 * (static_cast<double>(D) * kr * (ell - 1.0) + 1.0) / std::pow(ell, kr) *
                   std::sqrt(static_cast<double>(p)) * logp;
  res.slack = static_cast<double>(D * r);
  res.main_bound_ok = res.residual <= res.main_bound;
  res.bound_ok = res.residual <= res.main_bound + res.slack;
  return res;
}

}  // namespace detail

/// #M_P(v) for a single polynomial against the prediction N / d^r.
inline CensusResult census_M(const CensusSpec& spec, const Character& chi, unsigned threads = 1) {
  if (spec.polys.size() != 1) throw std::invalid_argument("census_M: exactly one polynomial expected");
  return detail::census_impl(spec, chi, threads);
}

/// #M_{P_1..P_k}(v_1..v_k) against N / d^(k r); requires multiplicative independence.
inline CensusResult joint_census(const CensusSpec& spec, const Character& chi, unsigned threads = 1) {
  const auto indep = multiplicatively_independent(spec.polys);
  if (!indep.independent) throw DependenceError(indep.witness);
  return detail::census_impl(spec, chi, threads);
}

struct ShiftedCensus {
  u64 count = 0;
  double prediction = 0;   // (|I|/L) (|J|/p)^|H|
  u64 boundary_misses = 0; // pairs (x, h) with L | x, x in I, x + h outside I
};

/// N_{C,Omega}(H) = sum_{x in I, L | x} prod_{h in H} delta(x + h).
inline ShiftedCensus shifted_census(const DeltaIndex& index, const std::vector<u64>& shifts, u64 stride) {
  const Rect& rect = index.rect();
  const u64 p = index.curve().p();
  if (stride == 0) throw std::invalid_argument("shifted_census: stride must be >= 1");
  std::vector<u64> sorted = shifts;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("shifted_census: shifts must be pairwise distinct");
  }
  if (auto star = condition_star(index); !star.ok) throw ConditionStarError(*star.witness);
  ShiftedCensus out;
  const u64 first = (rect.x.lo + stride - 1) / stride * stride;
  for (u64 x = first; x <= rect.x.hi; x += stride) {
    bool all = true;
    for (u64 h : shifts) {
      const u64 xh = x + h;
      if (!rect.x.contains(xh)) {
        ++out.boundary_misses;
        all = false;
      } else if (all && index.hits(xh) == 0) {
        all = false;
      }
    }
    if (all) ++out.count;
    if (rect.x.hi - x < stride) break;
  }
  out.prediction = static_cast<double>(rect.x.size()) / static_cast<double>(stride) *
                   std::pow(static_cast<double>(rect.y.size()) / static_cast<double>(p),
                            static_cast<double>(shifts.size()));
  return out;
}

inline ShiftedCensus shifted_census(const Curve& C, const Rect& rect, const std::vector<u64>& shifts, u64 stride) {
  return shifted_census(DeltaIndex(C, rect), shifts, stride);
}

/// #M_{C,Omega}(v) = #{x in I : L | x, delta(x + x_j) = v_j for all j}, counted directly.
inline u64 restricted_census(const DeltaIndex& index, const std::vector<u64>& offsets,
                             const std::vector<std::uint8_t>& v, u64 stride) {
  if (offsets.size() != v.size()) throw std::invalid_argument("restricted_census: length mismatch");
  const Rect& rect = index.rect();
  u64 count = 0;
  const u64 first = (rect.x.lo + stride - 1) / stride * stride;
  for (u64 x = first; x <= rect.x.hi; x += stride) {
    bool ok = true;
    for (std::size_t j = 0; j < offsets.size() && ok; ++j) ok = index.delta(x + offsets[j]) == (v[j] != 0);
    count += ok ? 1 : 0;
    if (rect.x.hi - x < stride) break;
  }
  return count;
}

/// The same count through sum_{E subset B} (-1)^|E| N_{C,Omega}(A u E),
/// A = {x_j : v_j = 1}, B = {x_j : v_j = 0}.
inline i64 restricted_census_inclusion_exclusion(const DeltaIndex& index, const std::vector<u64>& offsets,
                                                 const std::vector<std::uint8_t>& v, u64 stride) {
  if (offsets.size() != v.size()) throw std::invalid_argument("restricted_census: length mismatch");
  std::vector<u64> A;
  std::vector<u64> B;
  for (std::size_t j = 0; j < offsets.size(); ++j) (v[j] ? A : B).push_back(offsets[j]);
  if (B.size() > 20) throw std::invalid_argument("restricted_census: too many zero entries");
  i64 total = 0;
  for (u64 mask = 0; mask < (u64{1} << B.size()); ++mask) {
    std::vector<u64> H = A;
    for (std::size_t b = 0; b < B.size(); ++b) {
      if (mask >> b & 1U) H.push_back(B[b]);
    }
    i64 n = 0;
    if (H.empty()) {
      const Rect& rect = index.rect();
      const u64 first = (rect.x.lo + stride - 1) / stride * stride;
      n = first > rect.x.hi ? 0 : static_cast<i64>((rect.x.hi - first) / stride + 1);
    } else {
      n = static_cast<i64>(shifted_census(index, H, stride).count);
    }
    total += (std::popcount(mask) % 2 == 0) ? n : -n;
  }
  return total;
}

}  // namespace curvestat
