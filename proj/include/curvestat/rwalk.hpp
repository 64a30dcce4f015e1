#pragma once

/**
 * @file rwalk.hpp
 * @brief The random-walk reference model on Z/mZ.
 *
 * Each step is X - Y with X, Y independent copies of a two-point law:
 * value v with probability q, 0 otherwise. The power-residue law has
 * v = ell, q = 1/ell (the fiber size F(chi(P(x))) for a uniformly random
 * character value); the indicator law has v = 1, q = alpha and models the
 * restricted-rectangle counts.
 *
 * Besides Monte Carlo, this header enumerates the three exponential-sum
 * identities that bound the model's deviation from uniformity, for
 * parameters small enough to enumerate exhaustively.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "curvestat/errors.hpp"
#include "curvestat/ffield.hpp"
#include "curvestat/parallel.hpp"
#include "curvestat/rng.hpp"

namespace curvestat {

struct StepLaw {
  u64 value = 2;
  u64 prob_num = 1;
  u64 prob_den = 2;

  static StepLaw power_residue(u64 ell) { return {ell, 1, ell}; }
  static StepLaw indicator(u64 num, u64 den) { return {1, num, den}; }

  double q() const { return static_cast<double>(prob_num) / static_cast<double>(prob_den); }
};

struct WalkConfig {
  u64 ell = 2;
  u64 m = 2;
  u64 L = 1;
  u64 trials = 1;
  u64 seed = 0;

  void validate() const {
    if (ell < 2) throw std::invalid_argument("WalkConfig: ell must be >= 2");
    if (m < 1) throw std::invalid_argument("WalkConfig: m must be >= 1");
    if (L < 1) throw std::invalid_argument("WalkConfig: L must be >= 1");
    if (trials < 1) throw std::invalid_argument("WalkConfig: trials must be >= 1");
  }
};

struct PhiSimulation {
  u64 m = 1;
  u64 L = 1;
  /// hits[t][a] = #{x <= L : Z_x = a (mod m)} in trial t; Phi = hits / L.
  std::vector<std::vector<u64>> hits;
  std::vector<double> mean;      // per class, of Phi
  std::vector<double> variance;  // per class, sample variance of Phi across trials
  u64 x_draws = 0;               // total X and Y draws
  u64 x_at_value = 0;            // draws equal to ell

  double phi(std::size_t trial, std::size_t a) const {
    return static_cast<double>(hits[trial][a]) / static_cast<double>(L);
  }
};

/// Phi(L; m, a) over independent trials; trial t draws from stream (seed, t).
inline PhiSimulation simulate_phi(const WalkConfig& cfg, unsigned threads = 1) {
  cfg.validate();
  PhiSimulation out;
  out.m = cfg.m;
  out.L = cfg.L;
  out.hits.assign(cfg.trials, std::vector<u64>(cfg.m, 0));
  std::vector<u64> at_value(cfg.trials, 0);
  const u64 step = cfg.ell % cfg.m;
  parallel_chunks(cfg.trials, threads, [&](std::size_t, Chunk c) {
    for (std::size_t t = c.begin; t < c.end; ++t) {
      CounterStream rng(cfg.seed, t);
      u64 z = 0;
      auto& h = out.hits[t];
      for (u64 x = 0; x < cfg.L; ++x) {
        const bool X = rng.bernoulli(1, cfg.ell);
        const bool Y = rng.bernoulli(1, cfg.ell);
        at_value[t] += static_cast<u64>(X) + static_cast<u64>(Y);
        if (X && !Y) z = (z + step) % cfg.m;
        if (Y && !X) z = (z + cfg.m - step) % cfg.m;
        ++h[z];
      }
    }
  });
  out.x_draws = 2 * cfg.L * cfg.trials;
  for (u64 v : at_value) out.x_at_value += v;
  out.mean.assign(cfg.m, 0.0);
  out.variance.assign(cfg.m, 0.0);
  for (u64 a = 0; a < cfg.m; ++a) {
    double mean = 0;
    for (std::size_t t = 0; t < cfg.trials; ++t) mean += out.phi(t, a);
    mean /= static_cast<double>(cfg.trials);
    double var = 0;
    for (std::size_t t = 0; t < cfg.trials; ++t) var += (out.phi(t, a) - mean) * (out.phi(t, a) - mean);
    out.mean[a] = mean;
    out.variance[a] = cfg.trials > 1 ? var / static_cast<double>(cfg.trials - 1) : 0.0;
  }
  return out;
}

/// lhs: enumerated double sum; bound: the closed-form right side.
struct EnumResult {
  double lhs = 0;
  double bound = 0;
  bool pass = false;
};

inline constexpr u64 kEnumerationLimit = u64{1} << 20;

namespace detail {

inline u128 ipow128(u64 base, u64 e) {
  u128 r = 1;
  for (u64 i = 0; i < e; ++i) r *= base;
  return r;
}

inline void require_enumerable(u64 alphabet, u64 length) {
  u128 n = 1;
  for (u64 i = 0; i < length; ++i) {
    n *= alphabet;
    if (n > kEnumerationLimit) {
      throw std::invalid_argument("enumeration too large: alphabet^length must be <= 2^20");
    }
  }
}

inline std::vector<std::complex<double>> unit_roots(u64 m) {
  std::vector<std::complex<double>> r(m);
  for (u64 j = 0; j < m; ++j) {
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
    r[j] = {std::cos(ang), std::sin(ang)};
  }
  return r;
}

// sum_a sum_{v, v'} |sum_{x<=L} sum_{t=1}^{m-1} e_m(t (W_x - a))|^2 with
// W_x = sum_{j<=x} step(v_j) - step(v'_j) and v_j ranging over `alphabet`
// symbols.
template <class Step>
double enumerate_one_dim(u64 alphabet, u64 m, u64 L, const Step& step) {
  require_enumerable(alphabet, 2 * L);
  if (m == 1) return 0.0;
  const auto roots = unit_roots(m);
  const u64 combos = static_cast<u64>(ipow128(alphabet, 2 * L));
  std::vector<u64> sym(2 * L);
  std::vector<u64> W(L);
  double lhs = 0.0;
  for (u64 code = 0; code < combos; ++code) {
    u64 c = code;
    for (auto& s : sym) {
      s = c % alphabet;
      c /= alphabet;
    }
    i64 w = 0;
    for (u64 x = 0; x < L; ++x) {
      w += static_cast<i64>(step(sym[x])) - static_cast<i64>(step(sym[L + x]));
      W[x] = static_cast<u64>(((w % static_cast<i64>(m)) + static_cast<i64>(m)) % static_cast<i64>(m));
    }
    for (u64 a = 0; a < m; ++a) {
      std::complex<double> S{0.0, 0.0};
      for (u64 x = 0; x < L; ++x) {
        const u64 base = (W[x] + m - a) % m;
        for (u64 t = 1; t < m; ++t) S += roots[(t * base) % m];
      }
      lhs += std::norm(S);
    }
  }
  return lhs;
}

inline void require_coprime(u64 ell, u64 m) {
  if (std::gcd(ell, m) != 1) throw HypothesisError({"GCD(ℓ,m)=1"});
}

}  // namespace detail

namespace detail {

/// Part (a) with the ell-th root of unity `identity` playing the role of 1.
inline EnumResult prop21a_relabeled(u64 ell, u64 m, u64 L, u64 identity) {
  if (ell < 2 || m < 1 || L < 1) throw std::invalid_argument("exact_prop21a: need ell >= 2, m >= 1, L >= 1");
  require_coprime(ell, m);
  EnumResult r;
  r.lhs = enumerate_one_dim(ell, m, L, [&](u64 v) { return v == identity ? ell : 0; });
  r.bound = static_cast<double>(7 * ipow128(m, 4) * L * ipow128(ell, 2 * L + 2));
  r.pass = r.lhs <= r.bound * (1 + 1e-6);
  return r;
}

}  // namespace detail

/// sum_a sum_{v,v' in mu_ell^L} |sum_x sum_{t=1}^{m-1} e_m(t(sum F(v_j) - sum F(v'_j) - a))|^2
/// against 7 m^4 L ell^(2L+2).
inline EnumResult exact_prop21a(u64 ell, u64 m, u64 L) { return detail::prop21a_relabeled(ell, m, L, 0); }

/// Same sum with v, v' in {0,1}^L and steps v_j themselves, against 2^(2L+2) m^4 L.
inline EnumResult exact_prop21c(u64 m, u64 L) {
  if (m < 1 || L < 1) throw std::invalid_argument("exact_prop21c: need m >= 1, L >= 1");
  EnumResult r;
  r.lhs = detail::enumerate_one_dim(2, m, L, [](u64 v) { return v; });
  r.bound = static_cast<double>(detail::ipow128(2, 2 * L + 2) * detail::ipow128(m, 4) * L);
  r.pass = r.lhs <= r.bound * (1 + 1e-6);
  return r;
}

/// k-dimensional version over t in (Z/m)^k minus 0, against 7 m^(2k+2) L ell^(2Lk+2).
inline EnumResult exact_prop21b(u64 ell, u64 m, u64 L, u64 k) {
  if (ell < 2 || m < 1 || L < 1 || k < 1) throw std::invalid_argument("exact_prop21b: bad parameters");
  detail::require_coprime(ell, m);
  detail::require_enumerable(ell, 2 * L * k);
  EnumResult r;
  r.bound = static_cast<double>(7 * detail::ipow128(m, 2 * k + 2) * L * detail::ipow128(ell, 2 * L * k + 2));
  if (m == 1) {
    r.pass = true;
    return r;
  }
  const auto roots = detail::unit_roots(m);
  const u64 cells = static_cast<u64>(detail::ipow128(m, k));
  const u64 combos = static_cast<u64>(detail::ipow128(ell, 2 * L * k));
  std::vector<u64> sym(2 * L * k);
  std::vector<u64> W(L * k);  // W[x * k + l]
  auto unpack = [&](u64 code, std::vector<u64>& out) {
    for (auto& d : out) {
      d = code % m;
      code /= m;
    }
  };
  std::vector<u64> a(k);
  std::vector<u64> t(k);
  for (u64 code = 0; code < combos; ++code) {
    u64 c = code;
    for (auto& s : sym) {
      s = c % ell;
      c /= ell;
    }
    for (u64 l = 0; l < k; ++l) {
      i64 w = 0;
      const u64 base = l * 2 * L;
      for (u64 x = 0; x < L; ++x) {
        w += (sym[base + x] == 0 ? static_cast<i64>(ell) : 0) - (sym[base + L + x] == 0 ? static_cast<i64>(ell) : 0);
        W[x * k + l] = static_cast<u64>(((w % static_cast<i64>(m)) + static_cast<i64>(m)) % static_cast<i64>(m));
      }
    }
    for (u64 acode = 0; acode < cells; ++acode) {
      unpack(acode, a);
      std::complex<double> S{0.0, 0.0};
      for (u64 x = 0; x < L; ++x) {
        for (u64 tcode = 1; tcode < cells; ++tcode) {
          unpack(tcode, t);
          u64 phase = 0;
          for (u64 l = 0; l < k; ++l) phase = (phase + t[l] * ((W[x * k + l] + m - a[l]) % m)) % m;
          S += roots[phase];
        }
      }
      r.lhs += std::norm(S);
    }
  }
  r.pass = r.lhs <= r.bound * (1 + 1e-6);
  return r;
}

enum class ModelMethod {
  automatic,    // exact block law when its support is small, else direct
  block_law,    // multinomial over the exact per-block occupancy law
  direct,       // step-by-step simulation of every block
};

/// N independent blocks of L steps per trial. Each block starts at a
/// uniform cell of (Z/m)^k and runs k independent walks; occupancy of
/// steps 1..L is accumulated over blocks, and the trial statistic is
/// sum_cells (Phi - 1/m^k)^2.
struct ModelConfig {
  StepLaw law;
  u64 m = 2;
  u64 L = 1;
  u64 blocks = 1;
  u64 k = 1;
  u64 trials = 1;
  u64 seed = 0;
  ModelMethod method = ModelMethod::automatic;
};

struct ModelQuantiles {
  double q50 = 0;
  double q95 = 0;
  double q99 = 0;
  std::vector<double> samples;  // trial order
  ModelMethod method_used = ModelMethod::direct;
};

/// Linear-interpolation quantile (type 7) of an unsorted sample.
inline double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) throw std::invalid_argument("quantile: empty sample");
  std::sort(xs.begin(), xs.end());
  const double h = (static_cast<double>(xs.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (h - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

namespace detail {

struct BlockType {
  std::vector<std::uint16_t> occupancy;
  double prob;
};

inline constexpr std::size_t kBlockLawStateLimit = 1U << 20;

// Exact law of one block's occupancy vector, or empty if the state space
// would exceed kBlockLawStateLimit.
inline std::vector<BlockType> block_law(const ModelConfig& cfg) {
  const u64 cells = static_cast<u64>(ipow128(cfg.m, cfg.k));
  if (cells > 4096 || cfg.L > 60000) return {};
  const double q = cfg.law.q();
  const double p_up = q * (1 - q);
  const double p_stay = q * q + (1 - q) * (1 - q);
  const u64 step = cfg.law.value % cfg.m;
  // Joint step outcomes over the k coordinates.
  std::vector<std::pair<std::vector<u64>, double>> moves;
  const u64 outcomes = static_cast<u64>(ipow128(3, cfg.k));
  for (u64 code = 0; code < outcomes; ++code) {
    std::vector<u64> delta(cfg.k);
    double pr = 1.0;
    u64 c = code;
    for (u64 l = 0; l < cfg.k; ++l) {
      switch (c % 3) {
        case 0: delta[l] = 0; pr *= p_stay; break;
        case 1: delta[l] = step; pr *= p_up; break;
        default: delta[l] = (cfg.m - step) % cfg.m; pr *= p_up; break;
      }
      c /= 3;
    }
    if (pr > 0) moves.emplace_back(std::move(delta), pr);
  }
  // state = [position cell, occupancy...]
  using State = std::vector<std::uint16_t>;
  std::map<State, double> cur;
  for (u64 s = 0; s < cells; ++s) {
    State st(cells + 1, 0);
    st[0] = static_cast<std::uint16_t>(s);
    cur[st] += 1.0 / static_cast<double>(cells);
  }
  for (u64 x = 0; x < cfg.L; ++x) {
    std::map<State, double> next;
    for (const auto& [st, pr] : cur) {
      u64 pos = st[0];
      std::vector<u64> coord(cfg.k);
      for (u64 l = 0; l < cfg.k; ++l) {
        coord[l] = pos % cfg.m;
        pos /= cfg.m;
      }
      for (const auto& [delta, pm] : moves) {
        u64 cell = 0;
        u64 mult = 1;
        for (u64 l = 0; l < cfg.k; ++l) {
          cell += ((coord[l] + delta[l]) % cfg.m) * mult;
          mult *= cfg.m;
        }
        State ns = st;
        ns[0] = static_cast<std::uint16_t>(cell);
        ++ns[1 + cell];
        next[ns] += pr * pm;
      }
      if (next.size() > kBlockLawStateLimit) return {};
    }
    cur = std::move(next);
  }
  std::map<std::vector<std::uint16_t>, double> occ;
  for (const auto& [st, pr] : cur) occ[std::vector<std::uint16_t>(st.begin() + 1, st.end())] += pr;
  std::vector<BlockType> out;
  out.reserve(occ.size());
  for (auto& [o, pr] : occ) out.push_back({o, pr});
  return out;
}

inline double trial_discrepancy(const std::vector<u64>& totals, u64 steps) {
  const auto cells = static_cast<long double>(totals.size());
  const auto n = static_cast<long double>(steps);
  long double num = 0;
  for (u64 c : totals) {
    const long double dev = cells * static_cast<long double>(c) - n;
    num += dev * dev;
  }
  return static_cast<double>(num / (cells * cells * n * n));
}

}  // namespace detail

/// Distribution of the model discrepancy over `trials` independent trials.
inline ModelQuantiles model_reference(const ModelConfig& cfg, unsigned threads = 1) {
  if (cfg.m < 1 || cfg.L < 1 || cfg.blocks < 1 || cfg.k < 1 || cfg.trials < 1) {
    throw std::invalid_argument("model_reference: m, L, blocks, k, trials must all be >= 1");
  }
  if (cfg.law.prob_den == 0 || cfg.law.prob_num > cfg.law.prob_den) {
    throw std::invalid_argument("model_reference: step probability must lie in [0, 1]");
  }
  ModelQuantiles out;
  out.samples.assign(cfg.trials, 0.0);
  const u64 cells = static_cast<u64>(detail::ipow128(cfg.m, cfg.k));
  if (cfg.m == 1) {
    out.method_used = ModelMethod::direct;
    return out;
  }
  std::vector<detail::BlockType> law;
  if (cfg.method != ModelMethod::direct) law = detail::block_law(cfg);
  if (cfg.method == ModelMethod::block_law && law.empty()) {
    throw std::invalid_argument("model_reference: block law too large to enumerate");
  }
  const bool use_law = !law.empty();
  out.method_used = use_law ? ModelMethod::block_law : ModelMethod::direct;
  const u64 steps = cfg.blocks * cfg.L;
  const u64 step = cfg.law.value % cfg.m;

  parallel_chunks(cfg.trials, threads, [&](std::size_t, Chunk c) {
    std::vector<u64> totals(cells);
    std::vector<u64> coord(cfg.k);
    for (std::size_t t = c.begin; t < c.end; ++t) {
      CounterStream rng(cfg.seed, t);
      std::fill(totals.begin(), totals.end(), 0);
      if (use_law) {
        // Multinomial(blocks, law) by sequential conditional binomials.
        u64 remaining = cfg.blocks;
        double mass = 1.0;
        for (std::size_t i = 0; i < law.size() && remaining > 0; ++i) {
          u64 n = remaining;
          if (i + 1 < law.size()) {
            const double ratio = std::clamp(law[i].prob / mass, 0.0, 1.0);
            std::binomial_distribution<u64> bin(remaining, ratio);
            n = bin(rng);
          }
          for (u64 a = 0; a < cells; ++a) totals[a] += n * law[i].occupancy[a];
          remaining -= n;
          mass -= law[i].prob;
        }
      } else {
        for (u64 b = 0; b < cfg.blocks; ++b) {
          for (auto& v : coord) v = rng.below(cfg.m);
          for (u64 x = 0; x < cfg.L; ++x) {
            u64 cell = 0;
            u64 mult = 1;
            for (u64 l = 0; l < cfg.k; ++l) {
              const bool X = rng.bernoulli(cfg.law.prob_num, cfg.law.prob_den);
              const bool Y = rng.bernoulli(cfg.law.prob_num, cfg.law.prob_den);
              if (X && !Y) coord[l] = (coord[l] + step) % cfg.m;
              if (Y && !X) coord[l] = (coord[l] + cfg.m - step) % cfg.m;
              cell += coord[l] * mult;
              mult *= cfg.m;
            }
            ++totals[cell];
          }
        }
      }
      out.samples[t] = detail::trial_discrepancy(totals, steps);
    }
  });
  out.q50 = quantile(out.samples, 0.50);
  out.q95 = quantile(out.samples, 0.95);
  out.q99 = quantile(out.samples, 0.99);
  return out;
}

}  // namespace curvestat
