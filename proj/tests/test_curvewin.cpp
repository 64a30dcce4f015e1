#include <gtest/gtest.h>

#include "curvestat/curvewin.hpp"
#include "oracles.hpp"

using namespace curvestat;

namespace {

Curve curve(u64 p, u64 ell, const std::vector<i64>& c) { return Curve(FieldSpec(p), ell, Poly::from_signed(c, p)); }

}  // namespace

TEST(Fiber, Examples) {
  const Curve sq = curve(7, 2, {0, 1});
  EXPECT_EQ(fiber_count(sq, 2), 2U);
  EXPECT_EQ(fiber_count(sq, 0), 1U);
  EXPECT_EQ(fiber_count(curve(7, 3, {0, 1}), 1), 3U);
}

TEST(Fiber, MatchesExhaustiveRootCount) {
  CounterStream rng(31, 0);
  for (u64 p = 3; p <= 200; ++p) {
    if (!oracles::is_prime_trial(p)) continue;
    const FieldSpec f(p);
    for (u64 ell : {2, 3, 4}) {
      const auto pre = oracles::power_preimages(p, ell);
      for (int i = 0; i < 50; ++i) {
        const Poly P = oracles::random_poly(rng, p, 1, 5);
        const Curve C(f, ell, P);
        for (u64 x = 0; x < p; ++x) ASSERT_EQ(fiber_count(C, x), pre[P(x)]) << P.str() << " p=" << p;
      }
    }
  }
}

TEST(Window, Examples) {
  const Curve C = curve(7, 2, {0, 1});
  EXPECT_EQ(window_counts(C, {0, 1, 3}), (std::vector<i64>{4}));
  EXPECT_EQ(window_counts(C, {3, 1, 3}), (std::vector<i64>{2}));
  // Window (0, 2] of P = (x-1)(x-2) covers only roots.
  EXPECT_EQ(window_counts(curve(7, 2, {2, -3, 1}), {0, 1, 2}), (std::vector<i64>{2}));
}

TEST(Window, RejectsWrapAround) {
  const Curve C = curve(7, 2, {0, 1});
  EXPECT_THROW(window_counts(C, {0, 5, 3}), std::invalid_argument);
  EXPECT_NO_THROW(window_counts(C, {0, 4, 3}));
}

TEST(Window, SlidingEqualsDirect) {
  CounterStream rng(32, 0);
  for (int i = 0; i < 100; ++i) {
    u64 p = 0;
    while (p < 5 || !is_prime(p)) p = 5 + rng.below(600);
    const u64 ell = 2 + rng.below(4);
    const Poly P = oracles::random_poly(rng, p, 1, 4);
    const u64 I = 1 + rng.below(p / 2);
    const u64 x_start = rng.below(p - I);
    const u64 len = 1 + rng.below(p - I - x_start);
    const Curve C(FieldSpec(p), ell, P);
    const ScanSpec spec{x_start, len, I};
    const auto want = oracles::window_counts_slow(P, ell, x_start, len, I);
    EXPECT_EQ(window_counts(C, spec, 1), want);
    EXPECT_EQ(window_counts(C, spec, 3), want);
  }
}

TEST(Window, ParityFollowsRootCount) {
  CounterStream rng(33, 0);
  for (int i = 0; i < 20; ++i) {
    u64 p = 0;
    while (p < 100 || !is_prime(p)) p = 100 + rng.below(3000);
    const Poly P = oracles::random_poly(rng, p, 1, 4);
    const Curve C(FieldSpec(p), 2, P);
    const u64 I = 1 + rng.below(p / 3);
    const auto counts = window_counts(C, {0, p - I, I});
    for (u64 x0 = 0; x0 < counts.size(); ++x0) {
      i64 roots = 0;
      for (u64 x = x0 + 1; x <= x0 + I; ++x) roots += P(x) == 0;
      ASSERT_EQ((counts[x0] - roots) % 2, 0);
    }
  }
}

TEST(Window, TotalPointsNearP) {
  CounterStream rng(34, 0);
  for (int i = 0; i < 40; ++i) {
    u64 p = 0;
    while (p < 50 || !is_prime(p)) p = 50 + rng.below(5000);
    const u64 ell = 2 + rng.below(3);
    const Poly P = oracles::random_poly(rng, p, 1, 5);
    if (!admissible(P, ell) || !nondegenerate(P, ell)) continue;
    const Curve C(FieldSpec(p), ell, P);
    i64 total = 0;
    for (u64 x = 0; x < p; ++x) total += static_cast<i64>(fiber_count(C, x));
    const double slack = static_cast<double>(ell) * (P.degree() + 1) * std::sqrt(static_cast<double>(p));
    EXPECT_LE(std::abs(static_cast<double>(total - static_cast<i64>(p))), slack) << P.str() << " p=" << p;
  }
}

TEST(Histogram, Examples) {
  const std::vector<i64> c{4, 2};
  const auto h2 = residue_histogram(c, 2);
  EXPECT_EQ(h2.counts, (std::vector<u64>{2, 0}));
  EXPECT_EQ(h2.phi(0), Rational(1, 1));
  const auto h3 = residue_histogram(c, 3);
  EXPECT_EQ(h3.counts, (std::vector<u64>{0, 1, 1}));
  EXPECT_EQ(h3.phi(1), Rational(1, 2));
  EXPECT_EQ(h3.phi(2), Rational(1, 2));
  const auto h1 = residue_histogram(c, 1);
  EXPECT_EQ(h1.phi(0), Rational(1, 1));
}

TEST(Histogram, ConservesMass) {
  CounterStream rng(35, 0);
  for (int i = 0; i < 50; ++i) {
    std::vector<i64> c(1 + rng.below(500));
    for (auto& v : c) v = static_cast<i64>(rng.below(1000)) - 500;
    const u64 m = 1 + rng.below(9);
    const auto h = residue_histogram(c, m);
    EXPECT_EQ(h.total, c.size());
    u64 sum = 0;
    Rational phi(0, 1);
    for (std::size_t a = 0; a < h.cells(); ++a) {
      sum += h.counts[a];
      phi = phi + h.phi(a);
    }
    EXPECT_EQ(sum, c.size());
    EXPECT_EQ(phi, Rational(1, 1));
  }
}

TEST(Discrepancy, Examples) {
  EXPECT_EQ(discrepancy(residue_histogram(std::vector<i64>{0, 1, 2}, 3)), Rational(0, 1));
  EXPECT_EQ(discrepancy(residue_histogram(std::vector<i64>{0, 2, 4}, 2)), Rational(1, 2));
  for (u64 m = 1; m <= 9; ++m) {
    EXPECT_EQ(discrepancy(residue_histogram(std::vector<i64>{0, 0}, m)), Rational(static_cast<i128>(m) - 1, m));
  }
}

TEST(Discrepancy, MatchesFloatingOracle) {
  CounterStream rng(36, 0);
  for (int i = 0; i < 50; ++i) {
    std::vector<i64> c(1 + rng.below(300));
    for (auto& v : c) v = static_cast<i64>(rng.below(50));
    const auto h = residue_histogram(c, 2 + rng.below(6));
    EXPECT_NEAR(discrepancy(h).to_double(), static_cast<double>(oracles::discrepancy_slow(h.counts)), 1e-12);
  }
}

TEST(Joint, DependentCubicCurvesSitOnDiagonal) {
  const u64 p = 1009;  // 1009 = 1 mod 3
  const FieldSpec f(p);
  const std::vector<Curve> cs{Curve(f, 3, Poly::from_signed({0, 1}, p)),
                              Curve(f, 3, Poly::from_signed({0, 0, 1}, p))};
  for (u64 m : {2, 4, 5}) {
    const auto j = joint_histogram(cs, {0, p - 41, 40}, m);
    for (std::size_t cell = 0; cell < j.hist.cells(); ++cell) {
      const auto a = j.hist.label(cell);
      if (a[0] != a[1]) {
        EXPECT_EQ(j.hist.counts[cell], 0U);
      }
    }
    EXPECT_EQ(j.hist.total, p - 41);
  }
}

TEST(Joint, SingleCurveReducesToResidueHistogram) {
  const Curve C = curve(1009, 2, {1, 1, 0, 1});
  const ScanSpec spec{5, 900, 30};
  const auto j = joint_histogram({C}, spec, 3);
  const auto h = residue_histogram(window_counts(C, spec), 3);
  EXPECT_EQ(j.hist, h);
  EXPECT_EQ(j.discrepancy, discrepancy(h));
  const auto one = joint_histogram({C}, spec, 1);
  EXPECT_EQ(one.hist.counts, (std::vector<u64>{900}));
}

TEST(Joint, RejectsMixedFields) {
  EXPECT_THROW(joint_histogram({curve(7, 2, {0, 1}), curve(11, 2, {0, 1})}, {0, 1, 1}, 2), std::invalid_argument);
}

TEST(ConditionStar, Examples) {
  const Curve C = curve(7, 2, {0, 1});
  EXPECT_TRUE(condition_star(C, {{0, 6}, {1, 3}}).ok);
  const auto bad = condition_star(C, {{0, 6}, {1, 6}});
  EXPECT_FALSE(bad.ok);
  EXPECT_EQ(bad.witness, 1U);
  // J = {3}: 3^2 = 2 only, fine.
  EXPECT_TRUE(condition_star(C, {{0, 6}, {3, 3}}).ok);
}

TEST(Restricted, Examples) {
  const Curve C = curve(7, 2, {0, 1});
  const Rect rect{{0, 6}, {1, 3}};
  EXPECT_EQ(restricted_window_counts(C, rect, {0, 1, 3}), (std::vector<i64>{2}));
  EXPECT_EQ(restricted_window_counts(C, rect, {0, 1, 0}), (std::vector<i64>{0}));
  EXPECT_THROW(restricted_window_counts(C, {{0, 6}, {1, 6}}, {0, 1, 3}), ConditionStarError);
}

TEST(Restricted, MatchesDirectRectangleCount) {
  const u64 p = 211;
  const Curve C = curve(p, 2, {0, 1});
  const Rect rect{{10, 190}, {1, 70}};
  const auto counts = restricted_window_counts(C, rect, {0, p - 20, 19}, 2);
  for (u64 x0 = 0; x0 < counts.size(); ++x0) {
    i64 want = 0;
    for (u64 x = x0 + 1; x <= x0 + 19; ++x) {
      if (!rect.x.contains(x)) continue;
      for (u64 y = rect.y.lo; y <= rect.y.hi; ++y) want += y * y % p == x;
    }
    ASSERT_EQ(counts[x0], want) << x0;
  }
}

TEST(Beta, Example) {
  const auto s = beta_residue_scan(FieldSpec(7), {3, 7}, {0, 1, 3}, 2);
  EXPECT_EQ(s.y_max, 3U);
  // [0, 3): x = 1, 2 are squares of y in {1, 2, 3}.
  EXPECT_EQ(s.residues, (std::vector<i64>{2}));
  EXPECT_EQ(s.nonresidues, (std::vector<i64>{1}));
}

TEST(Beta, ResiduesPlusNonresiduesIsWindow) {
  const u64 p = 1009;
  const auto s = beta_residue_scan(FieldSpec(p), {1, 3}, {0, p - 50, 50}, 4, 3);
  ASSERT_EQ(s.residues.size(), p - 50);
  for (std::size_t i = 0; i < s.residues.size(); ++i) EXPECT_EQ(s.residues[i] + s.nonresidues[i], 50);
  EXPECT_EQ(s.residue_hist.total, p - 50);
  EXPECT_THROW(beta_residue_scan(FieldSpec(p), {2, 3}, {0, 10, 5}, 2), std::invalid_argument);
}

TEST(Gauss, Examples) {
  EXPECT_EQ(gauss_lemma_check(3, 7).r, 1U);
  EXPECT_TRUE(gauss_lemma_check(3, 7).ok);
  EXPECT_EQ(gauss_lemma_check(1, 7).r, 0U);
  EXPECT_EQ(gauss_lemma_check(2, 11).r, 3U);
  EXPECT_TRUE(gauss_lemma_check(2, 11).ok);
}

TEST(Gauss, HoldsForAllSmallPrimes) {
  for (u64 p = 3; p <= 300; ++p) {
    if (!oracles::is_prime_trial(p)) continue;
    for (u64 a = 1; a < p; ++a) ASSERT_TRUE(gauss_lemma_check(a, p).ok) << a << " mod " << p;
  }
}

TEST(Cor4, Examples) {
  const FieldSpec f(13);
  // Window 1: x0 in [0, 11] that is not a nonresidue.
  u64 want = 0;
  for (u64 x0 = 0; x0 <= 11; ++x0) want += x0 == 0 || legendre(x0, 13) == 1;
  EXPECT_EQ(want, 6U);
  EXPECT_EQ(cor4_exceptional(f, 2, 1, 1), want);
  EXPECT_EQ(cor4_exceptional(f, 2, 13, 0), 0U);
  EXPECT_THROW(cor4_exceptional(FieldSpec(11), 3, 2, 1), HypothesisError);
}

TEST(Cor4, MonotoneInWindow) {
  const FieldSpec f(10009);
  for (std::uint32_t mu : {0U, 1U}) {
    u64 prev = ~u64{0};
    for (u64 w = 1; w <= 40; ++w) {
      const u64 c = cor4_exceptional(f, 2, w, mu);
      EXPECT_LE(c, prev) << "w=" << w;
      prev = c;
    }
  }
}
