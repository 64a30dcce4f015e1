#include <gtest/gtest.h>

#include "curvestat/rwalk.hpp"

using namespace curvestat;

TEST(Simulate, SingleClassIsFull) {
  const auto s = simulate_phi({3, 1, 50, 20, 1});
  for (std::size_t t = 0; t < 20; ++t) EXPECT_EQ(s.phi(t, 0), 1.0);
}

TEST(Simulate, OneStepLaw) {
  // L = 1: Z_1 = +ell w.p. q(1-q), -ell w.p. q(1-q), 0 otherwise.
  const u64 ell = 3;
  const u64 m = 7;
  const auto s = simulate_phi({ell, m, 1, 60000, 5}, 4);
  const double q = 1.0 / ell;
  const double up = q * (1 - q);
  const double n = 60000;
  EXPECT_NEAR(s.mean[0], 1 - 2 * up, 5 * std::sqrt(0.25 / n));
  EXPECT_NEAR(s.mean[ell], up, 5 * std::sqrt(up / n));
  EXPECT_NEAR(s.mean[m - ell], up, 5 * std::sqrt(up / n));
  for (u64 a = 0; a < m; ++a) {
    if (a != 0 && a != ell && a != m - ell) {
      EXPECT_EQ(s.mean[a], 0.0);
    }
  }
}

TEST(Simulate, MeanOccupancyNearUniform) {
  const u64 trials = 1000;
  const auto s = simulate_phi({2, 3, 10000, trials, 2026}, 4);
  for (u64 a = 0; a < 3; ++a) {
    const double se = std::sqrt(s.variance[a] / static_cast<double>(trials));
    EXPECT_NEAR(s.mean[a], 1.0 / 3.0, 3 * se) << "a=" << a;
  }
}

TEST(Simulate, StepLawConcentration) {
  for (u64 ell : {2, 3, 5}) {
    const u64 trials = 200;
    const u64 L = 500;
    const auto s = simulate_phi({ell, 4, L, trials, ell}, 2);
    const double freq = static_cast<double>(s.x_at_value) / static_cast<double>(s.x_draws);
    EXPECT_NEAR(freq, 1.0 / ell, 4 * std::sqrt(1.0 / (ell * trials * L))) << ell;
  }
}

TEST(Simulate, ThreadCountDoesNotChangeOutput) {
  const WalkConfig cfg{3, 5, 777, 64, 99};
  const auto a = simulate_phi(cfg, 1);
  const auto b = simulate_phi(cfg, 4);
  EXPECT_EQ(a.hits, b.hits);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.variance, b.variance);
}

TEST(WalkSumPartA, Examples) {
  EXPECT_EQ(exact_prop21a(2, 1, 3).lhs, 0.0);
  const auto r = exact_prop21a(2, 3, 2);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.bound, 72576.0);
  EXPECT_NEAR(r.lhs, 240.0, 1e-6);  // integer identity checked independently
  for (u64 L = 2; L <= 6; ++L) EXPECT_TRUE(exact_prop21a(2, 5, L).pass) << L;
}

TEST(WalkSumPartA, RejectsSharedFactor) { EXPECT_THROW(exact_prop21a(2, 4, 2), HypothesisError); }

TEST(WalkSumPartA, InvariantUnderRelabelingRoots) {
  for (u64 ell : {3, 4, 5}) {
    const double base = exact_prop21a(ell, 7, 2).lhs;
    for (u64 id = 1; id < ell; ++id) EXPECT_NEAR(detail::prop21a_relabeled(ell, 7, 2, id).lhs, base, 1e-9 * base);
  }
}

TEST(WalkSumPartC, Examples) {
  EXPECT_EQ(exact_prop21c(1, 4).lhs, 0.0);
  const auto r = exact_prop21c(2, 3);
  EXPECT_EQ(r.bound, 12288.0);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.lhs, 384.0, 1e-6);
  EXPECT_NEAR(exact_prop21c(2, 1).lhs, 8.0, 1e-9);
}

TEST(WalkSumPartB, ReducesToPartAForOneCurve) {
  for (u64 m : {3, 5}) {
    for (u64 L : {1, 2, 3}) {
      const double a = exact_prop21a(2, m, L).lhs;
      EXPECT_NEAR(exact_prop21b(2, m, L, 1).lhs, a, 1e-9 * std::max(1.0, a));
    }
  }
  EXPECT_TRUE(exact_prop21b(2, 3, 2, 2).pass);
  EXPECT_EQ(exact_prop21b(2, 1, 2, 2).lhs, 0.0);
}

TEST(Enumeration, BoundsPassAcrossMatrix) {
  for (u64 ell : {2, 3}) {
    for (u64 m : {1, 2, 3, 4, 5, 7}) {
      if (std::gcd(ell, m) != 1) continue;
      for (u64 L = 1; L <= 4; ++L) EXPECT_TRUE(exact_prop21a(ell, m, L).pass) << ell << " " << m << " " << L;
    }
  }
  for (u64 m : {1, 2, 3, 4}) {
    for (u64 L = 1; L <= 5; ++L) EXPECT_TRUE(exact_prop21c(m, L).pass);
  }
}

TEST(Enumeration, RefusesOversizedInput) { EXPECT_THROW(exact_prop21a(2, 3, 11), std::invalid_argument); }

TEST(Model, SingleClassIsZero) {
  ModelConfig cfg{StepLaw::power_residue(2), 1, 5, 10, 1, 50, 3};
  const auto q = model_reference(cfg);
  EXPECT_EQ(q.q50, 0.0);
  EXPECT_EQ(q.q95, 0.0);
  EXPECT_EQ(q.q99, 0.0);
}

TEST(Model, QuantileStableWhenTrialsDouble) {
  ModelConfig cfg{StepLaw::power_residue(2), 3, 5, 2000, 1, 4000, 17};
  const double a = model_reference(cfg, 4).q95;
  cfg.trials = 8000;
  const double b = model_reference(cfg, 4).q95;
  EXPECT_LT(std::fabs(a - b), 0.1 * a);
}

TEST(Model, BlockLawAgreesWithDirectSimulation) {
  for (u64 k : {1, 2}) {
    ModelConfig cfg{StepLaw::power_residue(3), 2, 4, 300, k, 4000, 5, ModelMethod::block_law};
    const auto law = model_reference(cfg, 4);
    EXPECT_EQ(law.method_used, ModelMethod::block_law);
    cfg.method = ModelMethod::direct;
    const auto direct = model_reference(cfg, 4);
    EXPECT_EQ(direct.method_used, ModelMethod::direct);
    EXPECT_NEAR(law.q50, direct.q50, 0.1 * direct.q50) << k;
    EXPECT_NEAR(law.q95, direct.q95, 0.1 * direct.q95) << k;
  }
}

TEST(Model, ThreadCountDoesNotChangeSamples) {
  for (auto method : {ModelMethod::block_law, ModelMethod::direct}) {
    ModelConfig cfg{StepLaw::indicator(1, 3), 3, 6, 100, 1, 300, 8, method};
    EXPECT_EQ(model_reference(cfg, 1).samples, model_reference(cfg, 4).samples);
  }
}

TEST(Model, QuantilesOrdered) {
  ModelConfig cfg{StepLaw::power_residue(2), 5, 3, 500, 1, 1000, 1};
  const auto q = model_reference(cfg, 2);
  EXPECT_LE(q.q50, q.q95);
  EXPECT_LE(q.q95, q.q99);
  EXPECT_GT(q.q50, 0.0);
}

TEST(Quantile, LinearInterpolation) {
  EXPECT_EQ(quantile({3, 1, 2}, 0.5), 2.0);
  EXPECT_EQ(quantile({0, 10}, 0.25), 2.5);
  EXPECT_THROW(quantile({}, 0.5), std::invalid_argument);
}
