#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "richardson/bounds.hpp"
#include "richardson/rng.hpp"

using namespace richardson;

TEST(Moments, HandValues) {
  MomentPair m = moments_T1(2.0, 256, 512, 128);
  EXPECT_DOUBLE_EQ(m.mean, 64.0);
  EXPECT_DOUBLE_EQ(m.variance, 416.0);
  m = moments_T2(2.0, 256, 512, 128);
  EXPECT_DOUBLE_EQ(m.mean, 128.0);
  EXPECT_DOUBLE_EQ(m.variance, 512.0);
  m = moments_T2(1.0, 256, 512, 128);
  EXPECT_DOUBLE_EQ(m.mean, -128.0);
  EXPECT_DOUBLE_EQ(m.variance, 896.0);
  m = moments_T1(3.0, 256, 512, 128);
  EXPECT_NEAR(m.mean, -128.0 / 3.0, 1e-12);
  EXPECT_NEAR(m.variance, 2944.0 / 9.0, 1e-12);
  m = moments_T1(1.0, 256, 512, 128);
  EXPECT_DOUBLE_EQ(m.mean, 512.0 + 128.0 - 256.0);
  EXPECT_DOUBLE_EQ(moments_T2(1.7, 256, 512, 0).mean, 256.0 - 512.0 / 1.7);
}

TEST(Moments, ReduceToPrintedFormsForGammaTwo) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> lam(0.5, 4.0);
  std::uniform_int_distribution<std::int64_t> an(1, 1 << 20);
  for (int i = 0; i < 10; ++i) {
    const double l = lam(gen);
    const std::int64_t a = an(gen);
    const double c = static_cast<double>(ceil_pow78(a));
    const double ad = static_cast<double>(a);
    EXPECT_NEAR(moments_T1(l, a, 2 * a, ceil_pow78(a)).mean, (2 / l - 1) * ad + c / l, 1e-9 * ad);
    EXPECT_NEAR(moments_T2(l, a, 2 * a, ceil_pow78(a)).mean, (1 - 2 / l) * ad + c, 1e-9 * ad);
  }
}

TEST(Moments, MonteCarloAgreement) {
  // T1 = (S2 + L)/lambda - S1 with S2 ~ Gamma(512), L ~ Gamma(128), S1 ~ Gamma(256).
  std::mt19937_64 gen(123);
  std::gamma_distribution<double> s1(256), s2(512), br(128);
  const int n = 200000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double t = (s2(gen) + br(gen)) / 2.0 - s1(gen);
    sum += t;
    sum2 += t * t;
  }
  const double mean = sum / n, var = sum2 / n - mean * mean;
  EXPECT_NEAR(mean, 64.0, 5 * std::sqrt(416.0 / n));
  EXPECT_NEAR(var, 416.0, 5 * 416.0 * std::sqrt(2.0 / n));
}

TEST(Chebyshev, Values) {
  EXPECT_DOUBLE_EQ(chebyshev_prob_bound({64, 416}, Side::event_T_negative), 0.1015625);
  EXPECT_DOUBLE_EQ(chebyshev_prob_bound({128, 512}, Side::event_T_negative), 0.03125);
  EXPECT_DOUBLE_EQ(chebyshev_prob_bound({-128, 896}, Side::event_T_nonnegative), 896.0 / 16384.0);
  EXPECT_DOUBLE_EQ(chebyshev_prob_bound({1, 50}, Side::event_T_negative), 1.0);
  EXPECT_THROW(chebyshev_prob_bound({-1, 1}, Side::event_T_negative), BoundError);
  EXPECT_THROW(chebyshev_prob_bound({1, 1}, Side::event_T_nonnegative), BoundError);
  double prev = 1.0;
  for (double scale : {1e2, 1e4, 1e6}) {
    const double b = chebyshev_prob_bound({scale, 3 * scale}, Side::event_T_negative);
    EXPECT_LT(b, prev);
    prev = b;
  }
  EXPECT_LT(prev, 1e-5);
}

TEST(UnionBound, DefaultLadder) {
  const BoundReport rep = coexistence_lower_bound(LadderSpec{}, 2.0);
  ASSERT_EQ(rep.levels.size(), 3u);
  EXPECT_DOUBLE_EQ(rep.levels[0].bound_d1, 0.1015625);
  EXPECT_DOUBLE_EQ(rep.levels[0].bound_d2, 0.03125);
  EXPECT_NEAR(rep.levels[1].bound_d1, 0.0354, 1e-4);
  EXPECT_NEAR(rep.levels[2].bound_d1, 0.0124, 1e-4);
  EXPECT_NEAR(rep.levels[1].bound_d2, 0.0106, 1e-4);
  EXPECT_NEAR(rep.levels[2].bound_d2, 0.0036, 1e-4);
  EXPECT_NEAR(rep.union_sum, 0.195, 5e-4);
  EXPECT_NEAR(rep.lower_bound, 0.805, 5e-4);
  EXPECT_TRUE(rep.valid);
  for (const auto& lb : rep.levels) {
    EXPECT_GE(lb.bound_d1, 0.0);
    EXPECT_LE(lb.bound_d1, 1.0);
  }
}

TEST(UnionBound, SingleLevelAndOutsideRegion) {
  LadderSpec s;
  s.a = SequenceSpec::explicit_values({256});
  EXPECT_NEAR(coexistence_lower_bound(s, 2.0).lower_bound, 0.867, 1e-3);
  const BoundReport out = coexistence_lower_bound(LadderSpec{}, 3.0);
  EXPECT_FALSE(out.valid);
  std::ostringstream os;
  write_bound_report(os, out);
  EXPECT_NE(os.str().find("no valid lower bound"), std::string::npos);
}

TEST(UnionBound, IntervalEndpointIsValid) {
  LadderSpec s;
  s.rule.gamma = 4;
  s.rule.beta = 1;
  EXPECT_TRUE(coexistence_lower_bound(s, 5.0).valid);
  EXPECT_TRUE(coexistence_lower_bound(s, 2.0).valid);
  EXPECT_FALSE(coexistence_lower_bound(s, 6.0).valid);
}

TEST(UnionBound, DecreasesInA1) {
  double prev = 10.0;
  for (int p = 5; p <= 12; ++p) {
    LadderSpec s;
    s.a = SequenceSpec::geometric(std::int64_t{1} << p, 4, 3);
    const double sum = coexistence_lower_bound(s, 2.0).union_sum;
    EXPECT_LT(sum, prev) << p;
    prev = sum;
  }
}

TEST(UnionBound, CsvFormat) {
  std::ostringstream os;
  write_bound_report(os, coexistence_lower_bound(LadderSpec{}, 2.0));
  const std::string s = os.str();
  EXPECT_EQ(s.rfind("level,bound_D1,bound_D2\n1,0.1015625,0.03125\n", 0), 0u);
  EXPECT_NE(s.find("union_sum,coex_lower_bound\n0.19480"), std::string::npos);
}

TEST(ChooseA1, Targets) {
  EXPECT_EQ(choose_a1(0.2, 4, 3, 2.0), 256);
  const std::int64_t loose = choose_a1(0.9, 4, 3, 2.0);
  EXPECT_LT(loose, 256);
  LadderSpec s;
  s.a = SequenceSpec::geometric(loose, 4, 3);
  EXPECT_LE(coexistence_lower_bound(s, 2.0).union_sum, 0.9);
  try {
    choose_a1(1e-9, 4, 1, 2.0);
    FAIL() << "expected ChooseA1Error";
  } catch (const ChooseA1Error& e) {
    EXPECT_GT(e.best_sum, 1e-9);
  }
}

TEST(GrowthConditions, ConditionTwoFailsAtDeskScale) {
  MultiSpineSpec s;
  s.b = SequenceSpec::explicit_values({512});
  s.delta = {0.1};
  const GrowthReport rep = check_growth_conditions(s, 1, 2000);
  ASSERT_EQ(rep.levels.size(), 1u);
  EXPECT_NEAR(rep.levels[0].cond_ii.lhs, 861.08, 0.01);
  EXPECT_DOUBLE_EQ(rep.levels[0].cond_ii.rhs, 25.6);
  EXPECT_FALSE(rep.levels[0].cond_ii.pass);
  EXPECT_TRUE(rep.eps_pass);
  EXPECT_LT(rep.eps_sum, 0.25);
}

TEST(GrowthConditions, LongPathWindowPasses) {
  // N = 10^4 at rate 1: the window is ten standard deviations wide.
  MultiSpineSpec s;
  s.k = 1;
  s.alphas = {1.0};
  s.b = SequenceSpec::explicit_values({10000});
  const GrowthReport rep = check_growth_conditions(s, 2, 5000);
  EXPECT_EQ(rep.levels[0].cond_i.worst_path_length, 10000);
  EXPECT_DOUBLE_EQ(rep.levels[0].cond_i.worst_frequency, 1.0);
  EXPECT_TRUE(rep.levels[0].cond_i.pass);
}

TEST(GrowthConditions, ReportIsDeterministic) {
  std::ostringstream a, b;
  write_growth_report(a, check_growth_conditions(MultiSpineSpec{}, 5, 1000));
  write_growth_report(b, check_growth_conditions(MultiSpineSpec{}, 5, 1000));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_NE(a.str().find("eps_sum,"), std::string::npos);
}
