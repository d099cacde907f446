#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include "savi/eprocess.hpp"
#include "savi/errors.hpp"

using namespace savi;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

WealthLedger ledger_with(std::initializer_list<double> bets) {
  WealthLedger l;
  for (double b : bets) l.step({b});
  return l;
}

}  // namespace

TEST(Ledger, IdentityBetLeavesWealth) {
  const auto l = ledger_step({}, {1.0});
  EXPECT_EQ(l.log_wealth(), 0.0);
  EXPECT_EQ(l.step_count(), 1u);
}

TEST(Ledger, LogAdditivity) {
  const auto l = ledger_with({2.0, 0.5});
  EXPECT_NEAR(l.log_wealth(), 0.0, 1e-15);
  EXPECT_NEAR(l.running_max_log_wealth(), std::log(2.0), 1e-15);
}

TEST(Ledger, ZeroIsAbsorbing) {
  const auto l = ledger_with({0.0, 5.0});
  EXPECT_TRUE(l.bankrupt());
  EXPECT_EQ(l.log_wealth(), -kInf);
  EXPECT_EQ(l.step_count(), 2u);
  EXPECT_EQ(l.running_max_log_wealth(), 0.0);
}

TEST(Ledger, TinyBetFlushesToBankrupt) {
  const auto l = ledger_with({1e-301});
  EXPECT_TRUE(l.bankrupt());
  EXPECT_FALSE(ledger_with({1e-299}).bankrupt());
}

TEST(Ledger, RejectsNegativeAndNaN) {
  WealthLedger l;
  EXPECT_THROW(l.step({-0.1}), InvalidBet);
  EXPECT_THROW(l.step({std::nan("")}), InvalidBet);
  EXPECT_THROW(l.step_log(std::nan("")), InvalidBet);
  EXPECT_EQ(l.step_count(), 0u);
}

TEST(Ville, BoundaryRejects) {
  EXPECT_TRUE(ville_test(ledger_with({20.0}), 0.05));
  EXPECT_FALSE(ville_test(ledger_with({19.999}), 0.05));
}

TEST(Ville, StaysRejectedOnRunningMax) {
  auto l = ledger_with({30.0});
  EXPECT_TRUE(ville_test(l, 0.05));
  l.step({2.0 / 30.0});
  EXPECT_TRUE(ville_test(l, 0.05));
}

TEST(Ville, AlphaOutsideUnitIntervalThrows) {
  EXPECT_THROW(ville_test({}, 0.0), ParameterError);
  EXPECT_THROW(ville_test({}, 1.0), ParameterError);
  EXPECT_THROW(ville_test({}, -0.5), ParameterError);
}

TEST(AnytimeP, Examples) {
  EXPECT_EQ(anytime_p({}).value, 1.0);
  EXPECT_NEAR(anytime_p(ledger_with({40.0})).value, 0.025, 1e-15);
  EXPECT_NEAR(anytime_p(ledger_with({8.0, 3.0 / 8.0})).value, 0.125, 1e-15);
}

TEST(Combine, AverageExamples) {
  const std::vector<EValue> a{{2}, {0}}, b{{1}, {1}, {1}}, c{{4}, {2}};
  const std::vector<double> half{0.5, 0.5}, third{1.0 / 3, 1.0 / 3, 1.0 / 3}, wc{0.25, 0.75};
  EXPECT_DOUBLE_EQ(combine_average(a, half).value, 1.0);
  EXPECT_NEAR(combine_average(b, third).value, 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(combine_average(c, wc).value, 2.5);
}

TEST(Combine, AverageWeightSumChecked) {
  const std::vector<EValue> a{{2}, {0}};
  const std::vector<double> bad{0.5, 0.6}, neg{1.5, -0.5}, nearly{0.5, 0.5 + 5e-13};
  EXPECT_THROW(combine_average(a, bad), ParameterError);
  EXPECT_THROW(combine_average(a, neg), ParameterError);
  EXPECT_NO_THROW(combine_average(a, nearly));
}

TEST(Combine, ProductExamples) {
  const std::vector<EValue> ones{{1}, {1}, {1}}, two_three{{2}, {3}}, zero{{5}, {0}, {100}};
  EXPECT_DOUBLE_EQ(combine_product(ones).value, 1.0);
  EXPECT_NEAR(combine_product(two_three).value, 6.0, 1e-14);
  EXPECT_EQ(combine_product(zero).value, 0.0);
}

TEST(Combine, ProductDoesNotOverflowInLogSpace) {
  std::vector<EValue> big(400, EValue{1e200});
  std::vector<EValue> tiny(400, EValue{1e-200});
  big.insert(big.end(), tiny.begin(), tiny.end());
  EXPECT_NEAR(combine_product(big).value, 1.0, 1e-9);
}

TEST(Calibrator, PowerExamples) {
  const auto f = Calibrator::power(0.5);
  EXPECT_DOUBLE_EQ(calibrate_p_to_e(1.0, f).value, 0.5);
  EXPECT_DOUBLE_EQ(calibrate_p_to_e(0.25, f).value, 1.0);
  EXPECT_NEAR(calibrate_p_to_e(0.01, f).value, 5.0, 1e-14);
  EXPECT_EQ(calibrate_p_to_e(0.0, f).value, kInf);
}

TEST(Calibrator, OutOfRangeThrows) {
  EXPECT_THROW(calibrate_p_to_e(-0.01, Calibrator::integrated()), ParameterError);
  EXPECT_THROW(calibrate_p_to_e(1.01, Calibrator::power(0.3)), ParameterError);
  EXPECT_THROW(Calibrator::power(1.0), ParameterError);
}

TEST(Calibrator, IntegratedMatchesDirectFormula) {
  const auto f = Calibrator::integrated();
  for (double p : {1e-6, 0.01, 0.3, 0.9, 0.999}) {
    const double lp = std::log(p);
    EXPECT_NEAR(f(p), (1 - p + p * lp) / (p * lp * lp), 1e-9 * f(p)) << p;
  }
  // Near p = 1 the closed form is 0/0; the limit is 1/2.
  EXPECT_NEAR(f(1.0), 0.5, 1e-12);
  EXPECT_NEAR(f(1.0 - 1e-9), 0.5, 1e-6);
}

// Substituting p = exp(-s). The integrated calibrator has mass ~1/S below
// exp(-S), beyond double range for any usable S, so that tail is added from
// its representation as a kappa-average: integral_0^P f = (1 - P) / (-log P).
TEST(Calibrator, EveryBuiltinIntegratesToOne) {
  boost::math::quadrature::tanh_sinh<double> q;
  constexpr double S = 700.0;
  for (const auto& f : builtin_calibrators()) {
    const double body = q.integrate([&](double s) { return f(std::exp(-s)) * std::exp(-s); }, 0.0, S);
    const double tail = f.kind() == Calibrator::Kind::integrated ? -std::expm1(-S) / S
                                                                 : std::exp(-S * f.kappa());
    EXPECT_NEAR(body + tail, 1.0, 1e-9) << f.name();
  }
}

TEST(Calibrator, BuiltinsAreNonincreasing) {
  for (const auto& f : builtin_calibrators()) {
    double prev = kInf;
    for (int i = 1; i <= 1000; ++i) {
      const double v = f(i / 1000.0);
      EXPECT_LE(v, prev * (1 + 1e-12)) << f.name() << " at " << i;
      prev = v;
    }
  }
}

TEST(Adjuster, NoEvidenceStaysBelowOne) {
  for (const auto& a : builtin_adjusters()) EXPECT_LE(adjust_running_max({}, a).value, 1.0) << a.name();
  EXPECT_EQ(adjust_running_max({}, Adjuster::sqrt_lookback()).value, 0.0);
}

TEST(Adjuster, ShrinksTheRunningMax) {
  for (const auto& a : builtin_adjusters())
    for (double y : {1.0, 1.5, 4.0, 100.0, 1e6, 1e100}) EXPECT_LE(a(y), y) << a.name() << " y=" << y;
}

TEST(Adjuster, SqrtAtHundred) {
  const auto l = ledger_with({100.0, 0.5});
  EXPECT_NEAR(adjust_running_max(l, Adjuster::sqrt_lookback()).value, 9.0, 1e-12);
  EXPECT_NEAR(Adjuster::sqrt_lookback().from_log(1e-12), 0.5e-12, 1e-24);
}

// integral_1^inf a(y) / y^2 dy = integral_0^1 a(1/u) du.
TEST(Adjuster, IntegralConditionByQuadrature) {
  boost::math::quadrature::tanh_sinh<double> q;
  for (const auto& a : builtin_adjusters()) {
    const double integral = q.integrate([&](double u) { return u > 0 ? a(1.0 / u) : 0.0; }, 0.0, 1.0);
    EXPECT_LE(integral, 1.0 + 1e-9) << a.name();
    EXPECT_NEAR(integral, 1.0, 1e-9) << a.name();
  }
}

TEST(Property, UnitBetsKeepWealthAtOne) {
  WealthLedger l;
  for (int i = 0; i < 10000; ++i) {
    l.step({1.0});
    ASSERT_EQ(l.log_wealth(), 0.0);
  }
}

TEST(Property, RandomPathsKeepLedgerInvariants) {
  std::mt19937_64 gen(7);
  std::lognormal_distribution<double> bet(0.0, 1.0);
  for (int path = 0; path < 200; ++path) {
    WealthLedger l;
    bool rejected = false;
    double p_prev = 1.0;
    for (int t = 1; t <= 200; ++t) {
      l.step({bet(gen)});
      ASSERT_EQ(l.step_count(), static_cast<std::size_t>(t));
      ASSERT_GE(l.running_max_log_wealth(), std::max(0.0, l.log_wealth()));
      const bool r = ville_test(l, 0.05);
      ASSERT_TRUE(!rejected || r);
      rejected = r;
      const double p = anytime_p(l).value;
      ASSERT_LE(p, p_prev);
      p_prev = p;
      ASSERT_NEAR(p * std::exp(l.running_max_log_wealth()), 1.0, 1e-12);
    }
  }
}

TEST(Property, InfiniteEValueRejectsAtAnyAlpha) {
  WealthLedger l;
  l.step({kInf});
  for (double a : {1e-300, 1e-10, 0.5}) EXPECT_TRUE(ville_test(l, a));
  EXPECT_EQ(anytime_p(l).value, 0.0);
}
