#include <gtest/gtest.h>

#include "curvestat/charsum.hpp"
#include "oracles.hpp"

using namespace curvestat;

namespace {

Poly P(std::vector<i64> c, u64 p) { return Poly::from_signed(c, p); }

// Direct recount of the stride census by character evaluation per term.
u64 census_slow(const std::vector<Poly>& Ps, const Character& chi, u64 stride, const std::vector<u64>& offsets, u64 N,
                const std::vector<std::vector<std::uint32_t>>& v) {
  const u64 p = chi.p();
  u64 count = 0;
  for (u64 i = 0; i <= N; ++i) {
    bool ok = true;
    for (std::size_t l = 0; l < Ps.size(); ++l) {
      for (std::size_t j = 0; j < offsets.size(); ++j) {
        const u64 val = Ps[l]((i * stride + offsets[j]) % p);
        // Index via exhaustive discrete log.
        if (val == 0) {
          ok = false;
          continue;
        }
        const u64 k = oracles::dlog_slow(val, chi.field().generator(), p);
        ok = ok && k % chi.order() == v[l][j];
      }
    }
    count += ok;
  }
  return count;
}

}  // namespace

TEST(IncompleteSum, Examples) {
  const FieldSpec f(7);
  const Character chi(f, 2);
  EXPECT_EQ(incomplete_sum(Poly::x(7), chi, {0, 6}).magnitude(), 0.0);
  const auto t = incomplete_sum(Poly::x(7), chi, {1, 3});
  EXPECT_EQ(t.counts, (std::vector<u64>{2, 1}));
  EXPECT_EQ(t.magnitude(), 1.0);
  for (u64 c = 1; c < 7; ++c) {
    const auto full = incomplete_sum(P({0, 0, static_cast<i64>(c)}, 7), chi, {0, 6});
    EXPECT_EQ(full.zero_count, 1U);
    EXPECT_EQ(full.counts[chi(c).index()], 6U);
    EXPECT_EQ(full.magnitude(), 6.0);
  }
}

TEST(IncompleteSum, SplitsOverDisjointIntervals) {
  CounterStream rng(41, 0);
  const u64 p = 10007;
  const FieldSpec f(p);
  for (int i = 0; i < 30; ++i) {
    const Character chi(f, 2 + rng.below(6));
    const Poly Q = oracles::random_poly(rng, p, 1, 4);
    const u64 lo = rng.below(p - 2);
    const u64 mid = lo + rng.below(p - 1 - lo);
    const u64 hi = mid + 1 + rng.below(p - 1 - mid);
    auto whole = incomplete_sum(Q, chi, {lo, hi}, 3);
    auto left = incomplete_sum(Q, chi, {lo, mid});
    left.merge(incomplete_sum(Q, chi, {mid + 1, hi}, 2));
    EXPECT_EQ(whole, left);
    EXPECT_EQ(whole.terms(), hi - lo + 1);
  }
}

TEST(IncompleteSum, EmptyIntervalIsZero) {
  const FieldSpec f(11);
  const auto t = incomplete_sum(Poly::x(11), Character(f, 2), {5, 4});
  EXPECT_EQ(t.terms(), 0U);
  EXPECT_EQ(t.magnitude(), 0.0);
}

TEST(Weil, CompleteSumBound) {
  CounterStream rng(42, 0);
  for (int i = 0; i < 60; ++i) {
    u64 p = 0;
    while (p < 50 || !is_prime(p)) p = 50 + rng.below(20000);
    const u64 ell = 2 + rng.below(5);
    const Character chi(FieldSpec(p), ell);
    if (chi.order() < 2) continue;
    const Poly Q = oracles::random_poly(rng, p, 1, 5);
    if (!admissible(Q, ell) || is_complete_power(Q, chi.order())) continue;
    const double mag = incomplete_sum(Q, chi, {0, p - 1}).magnitude();
    const double bound = (Q.degree() + 1) * std::sqrt(static_cast<double>(p));
    EXPECT_LE(mag, bound * (1 + 1e-9)) << Q.str() << " p=" << p;
    const auto w = weil_check(Q, chi, {0, p - 1});
    EXPECT_TRUE(w.pass);
    EXPECT_TRUE(twisted_weil_check(Q, chi, rng.below(p)).pass);
  }
}

TEST(Weil, SubintervalAndEmpty) {
  const u64 p = 10007;
  const Character chi(FieldSpec(p), 2);
  CounterStream rng(43, 0);
  for (int i = 0; i < 20; ++i) {
    const u64 lo = rng.below(p);
    const u64 hi = lo + rng.below(p - lo);
    EXPECT_TRUE(weil_check(Poly::x(p), chi, {lo, hi}).pass);
  }
  const auto w = weil_check(Poly::x(p), chi, {10, 9});
  EXPECT_EQ(w.magnitude, 0.0);
  EXPECT_TRUE(w.pass);
}

TEST(Weil, RejectsCompletePowers) {
  const Character chi(FieldSpec(7), 2);
  EXPECT_THROW(weil_check(P({1, 2, 1}, 7), chi, {0, 6}), HypothesisError);
}

TEST(TwistedSum, IndependentOfThreads) {
  const u64 p = 100003;
  const Character chi(FieldSpec(p), 3);
  const Poly Q = P({1, 1, 0, 1}, p);
  const double a = twisted_complete_sum(Q, chi, 17, 1);
  EXPECT_EQ(a, twisted_complete_sum(Q, chi, 17, 4));
  EXPECT_EQ(a, twisted_complete_sum(Q, chi, 17, 7));
}

TEST(Census, SingleOffsetCountsResidues) {
  const u64 p = 1009;
  const Character chi(FieldSpec(p), 2);
  CensusSpec s{{Poly::x(p)}, 1, {0}, p - 2, {{0}}, false};
  u64 want = 0;
  for (u64 i = 0; i <= p - 2; ++i) want += legendre(i, p) == 1;
  EXPECT_EQ(census_M(s, chi).count, want);
}

TEST(Census, UnreachableTargetAndSingleTerm) {
  const u64 p = 1009;
  const Character chi(FieldSpec(p), 3);
  CensusSpec s{{Poly::x(p)}, 1, {0, 1}, 500, {{0, 3}}, false};
  EXPECT_EQ(census_M(s, chi).count, 0U);
  CensusSpec one{{P({1, 1}, p)}, 7, {3}, 0, {{0}}, false};
  EXPECT_LE(census_M(one, chi).count, 1U);
}

TEST(Census, MatchesRecount) {
  CounterStream rng(44, 0);
  int done = 0;
  while (done < 60) {
    const u64 p = 3 + rng.below(498);
    if (!is_prime(p)) continue;
    const u64 ell = 2 + rng.below(3);
    const Character chi(FieldSpec(p), ell);
    const Poly Q = oracles::random_poly(rng, p, 1, 3);
    const u64 r = 1 + rng.below(3);
    std::vector<u64> offsets;
    while (offsets.size() < r) {
      const u64 x = rng.below(p);
      if (std::find(offsets.begin(), offsets.end(), x) == offsets.end()) offsets.push_back(x);
    }
    std::vector<std::uint32_t> v(r);
    for (auto& e : v) e = static_cast<std::uint32_t>(rng.below(chi.order()));
    const u64 stride = 1 + rng.below(5);
    const u64 N = rng.below(2 * p);
    const CensusSpec s{{Q}, stride, offsets, N, {v}, false};
    EXPECT_EQ(census_M(s, chi, 2).count, census_slow({Q}, chi, stride, offsets, N, {v})) << Q.str() << " p=" << p;
    ++done;
  }
}

TEST(Census, BoundsHoldOnModerateField) {
  const u64 p = 100003;
  const Character chi(FieldSpec(p), 3);
  const CensusSpec s{{P({1, 1, 0, 1}, p)}, 3, {0, 5}, 30000, {{0, 1}}, true};
  const auto res = census_M(s, chi, 2);
  EXPECT_TRUE(res.bound_ok);
  EXPECT_EQ(res.prediction, Rational(30000, 9));
}

TEST(Census, TheoremModeChecksHypotheses) {
  const u64 p = 1009;
  const Character chi(FieldSpec(p), 2);
  // r = 5 exceeds log p / log 4.
  const CensusSpec s{{Poly::x(p)}, 1, {0, 1, 2, 3, 4}, 100, {{0, 0, 0, 0, 0}}, true};
  EXPECT_THROW(census_M(s, chi), HypothesisError);
  const CensusSpec sq{{P({0, 0, 1}, p)}, 1, {0}, 100, {{0}}, true};
  EXPECT_THROW(census_M(sq, chi), HypothesisError);
}

TEST(JointCensus, SingleEqualsCensusM) {
  const u64 p = 1009;
  const Character chi(FieldSpec(p), 2);
  const CensusSpec s{{P({1, 0, 1}, p)}, 2, {1, 4}, 400, {{1, 0}}, false};
  EXPECT_EQ(joint_census(s, chi).count, census_M(s, chi).count);
}

TEST(JointCensus, DependentFamilyRejected) {
  const u64 p = 1009;
  const Character chi(FieldSpec(p), 3);
  const CensusSpec s{{Poly::x(p), P({0, 0, 1}, p)}, 1, {1}, 100, {{0}, {0}}, false};
  try {
    joint_census(s, chi);
    FAIL() << "expected DependenceError";
  } catch (const DependenceError& e) {
    EXPECT_EQ(e.witness(), (std::vector<i64>{2, -1}));
  }
}

TEST(JointCensus, TwoLinearPolysMatchEnumeration) {
  for (u64 p : {7ULL, 13ULL, 31ULL}) {
    const Character chi(FieldSpec(p), 2);
    const std::vector<Poly> Ps{Poly::x(p), P({1, 1}, p)};
    for (std::uint32_t a = 0; a < 2; ++a) {
      for (std::uint32_t b = 0; b < 2; ++b) {
        const CensusSpec s{Ps, 1, {0, 2}, p - 3, {{a, b}, {b, a}}, false};
        EXPECT_EQ(joint_census(s, chi).count, census_slow(Ps, chi, 1, {0, 2}, p - 3, {{a, b}, {b, a}}));
      }
    }
  }
}

TEST(Shifted, SingleShiftIsDeltaCensus) {
  const u64 p = 97;
  const Curve C(FieldSpec(p), 2, Poly::x(p));
  const Rect rect{{5, 90}, {1, 48}};
  const DeltaIndex idx(C, rect);
  for (u64 h : {0ULL, 1ULL, 3ULL}) {
    u64 want = 0;
    for (u64 x = rect.x.lo; x <= rect.x.hi; ++x) want += idx.delta(x + h);
    EXPECT_EQ(shifted_census(idx, {h}, 1).count, want);
  }
}

TEST(Shifted, MatchesExhaustiveProducts) {
  const u64 p = 31;
  const Curve C(FieldSpec(p), 2, P({3, 1, 1}, p));
  const Rect rect{{0, 30}, {1, 15}};
  if (!condition_star(C, rect).ok) GTEST_SKIP() << "rectangle violates (*)";
  const std::vector<u64> H{0, 2, 5};
  for (u64 stride : {1ULL, 2ULL, 3ULL}) {
    u64 want = 0;
    for (u64 x = 0; x <= 30; x += stride) {
      bool all = true;
      for (u64 h : H) {
        const u64 xh = x + h;
        bool hit = false;
        if (xh <= 30) {
          for (u64 y = 1; y <= 15; ++y) hit = hit || y * y % p == C.P()(xh);
        }
        all = all && hit;
      }
      want += all;
    }
    EXPECT_EQ(shifted_census(C, rect, H, stride).count, want) << stride;
  }
}

TEST(Shifted, InclusionExclusionEqualsDirect) {
  CounterStream rng(45, 0);
  int done = 0;
  while (done < 80) {
    const u64 p = 5 + rng.below(96);
    if (!is_prime(p)) continue;
    const Curve C(FieldSpec(p), 2, oracles::random_poly(rng, p, 1, 3));
    const Rect rect{{0, p - 1}, {1, (p - 1) / 2}};
    const DeltaIndex idx(C, rect);
    if (!condition_star(idx).ok) continue;
    const u64 r = 1 + rng.below(3);
    std::vector<u64> offsets;
    while (offsets.size() < r) {
      const u64 x = rng.below(p / 2);
      if (std::find(offsets.begin(), offsets.end(), x) == offsets.end()) offsets.push_back(x);
    }
    std::vector<std::uint8_t> v(r);
    for (auto& e : v) e = static_cast<std::uint8_t>(rng.below(2));
    const u64 stride = 1 + rng.below(3);
    EXPECT_EQ(restricted_census_inclusion_exclusion(idx, offsets, v, stride),
              static_cast<i64>(restricted_census(idx, offsets, v, stride)));
    ++done;
  }
}
