#include <gtest/gtest.h>

#include "curvestat/experiment.hpp"

using namespace curvestat;

namespace {

ExperimentInputs thm1(u64 p, std::vector<i64> c, u64 m, u64 I, u64 L) {
  ExperimentInputs in;
  in.kind = TheoremKind::thm1;
  in.p = p;
  in.ell = 2;
  in.polys = {Poly::from_signed(c, p)};
  in.m = m;
  in.scan = {0, p - I - L, I, L};
  in.model_trials = 200;
  in.waive_asymptotic = true;
  return in;
}

const HypothesisCheck& find(const ExperimentResult& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range(name);
}

}  // namespace

TEST(Experiment, SingleClassPassesTrivially) {
  const auto r = theorem_experiment(thm1(10007, {1, 1, 0, 1}, 1, 50, 3));
  EXPECT_EQ(r.discrepancy, Rational(0, 1));
  EXPECT_GT(r.bound, 0.0);
  EXPECT_TRUE(r.bound_pass);
  EXPECT_TRUE(r.model_pass);
}

TEST(Experiment, DependentCurvesAbort) {
  ExperimentInputs in;
  in.kind = TheoremKind::thm2;
  in.p = 10009;  // 1 mod 3
  in.ell = 3;
  in.polys = {Poly::x(in.p), Poly::from_signed({0, 0, 1}, in.p)};
  in.m = 2;
  in.scan = {0, 9000, 40, 2};
  in.waive_asymptotic = true;
  try {
    theorem_experiment(in);
    FAIL() << "expected HypothesisError";
  } catch (const HypothesisError& e) {
    ASSERT_FALSE(e.names().empty());
    EXPECT_EQ(e.names()[0], "multiplicative independence");
  }
}

TEST(Experiment, SharedFactorNamesGcdHypothesis) {
  try {
    theorem_experiment(thm1(10007, {1, 1, 0, 1}, 4, 50, 3));
    FAIL() << "expected HypothesisError";
  } catch (const HypothesisError& e) {
    EXPECT_EQ(e.names(), (std::vector<std::string>{"GCD(m,ℓ)=1"}));
  }
}

TEST(Experiment, AsymptoticChecksWaivedOrFailed) {
  auto in = thm1(10007, {1, 1, 0, 1}, 3, 50, 5);
  const auto r = theorem_experiment(in);
  const auto& c = find(r, "L < log p / (2 log 4d)");
  EXPECT_TRUE(c.asymptotic);
  EXPECT_EQ(c.status, CheckStatus::waived);
  EXPECT_EQ(find(r, "GCD(m,ℓ)=1").status, CheckStatus::pass);
  in.waive_asymptotic = false;
  EXPECT_THROW(theorem_experiment(in), HypothesisError);
}

TEST(Experiment, WindowOrderingEnforced) {
  auto in = thm1(10007, {1, 1, 0, 1}, 3, 4, 5);
  EXPECT_THROW(theorem_experiment(in), HypothesisError);
}

TEST(Experiment, RestrictedRectangleChecks) {
  ExperimentInputs in;
  in.kind = TheoremKind::thm3;
  in.p = 10007;
  in.ell = 2;
  in.polys = {Poly::x(in.p)};
  in.m = 3;
  in.scan = {0, 9000, 60, 2};
  in.rect = Rect{{0, 10006}, {1, 5003}};
  in.model_trials = 200;
  in.waive_asymptotic = true;
  const auto r = theorem_experiment(in);
  EXPECT_EQ(find(r, "condition (∗)").status, CheckStatus::pass);
  ASSERT_TRUE(r.alpha);
  EXPECT_EQ(*r.alpha, Rational(5003, 10007));
  EXPECT_EQ(r.hist.total, 9000U);
  EXPECT_DOUBLE_EQ(r.bound, 4.0 * 81 / 2);

  in.rect = Rect{{0, 10006}, {1, 10006}};
  try {
    theorem_experiment(in);
    FAIL() << "expected HypothesisError";
  } catch (const HypothesisError& e) {
    EXPECT_EQ(e.names(), (std::vector<std::string>{"condition (∗)"}));
  }
}

TEST(Experiment, ThreadCountDoesNotChangeResult) {
  const auto in = thm1(10007, {1, 1, 0, 1}, 3, 50, 5);
  const auto a = theorem_experiment(in, 1);
  const auto b = theorem_experiment(in, 4);
  EXPECT_EQ(a.hist, b.hist);
  EXPECT_EQ(a.model.samples, b.model.samples);
}

TEST(Experiment, TinyCurveWithinModelAcrossSeeds) {
  // y^2 = x over F_103 against the calibrated model, 100 seeds.
  int below = 0;
  for (u64 seed = 0; seed < 100; ++seed) {
    auto in = thm1(103, {0, 1}, 3, 10, 3);
    in.seed = seed;
    in.model_trials = 500;
    below += theorem_experiment(in).model_pass;
  }
  EXPECT_GE(below, 95);
}
