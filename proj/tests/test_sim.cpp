#include <cmath>
#include <memory>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "savi/conf_seq.hpp"
#include "savi/errors.hpp"
#include "savi/sequential.hpp"
#include "savi/sim/oracle.hpp"
#include "savi/sim/rng.hpp"
#include "savi/sim/samplers.hpp"

using namespace savi;
using namespace savi::sim;

// Known-answer vectors published with the reference Philox implementation.
TEST(Philox, KnownAnswers) {
  using C = Philox4x32::Counter;
  EXPECT_EQ(Philox4x32::block({0, 0, 0, 0}, {0, 0}), (C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(Philox4x32::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(Philox4x32::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RngStream, FirstDrawsAreTheFirstBlock) {
  RngStream s(0, 0);
  const auto b = Philox4x32::block({0, 0, 0, 0}, {0, 0});
  for (int i = 0; i < 4; ++i) EXPECT_EQ(s.next_u32(), b[static_cast<std::size_t>(i)]);
}

TEST(RngStream, ReproducibleAndDistinctSubstreams) {
  RngStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  std::size_t same_c = 0, same_d = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next_u64();
    ASSERT_EQ(x, b.next_u64());
    same_c += x == c.next_u64();
    same_d += x == d.next_u64();
  }
  EXPECT_EQ(same_c, 0u);
  EXPECT_EQ(same_d, 0u);
}

TEST(RngStream, UniformIsOpenAndCentred) {
  RngStream s(5, 0);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 4 * std::sqrt(1.0 / 12 / n));
}

TEST(Samplers, MomentsMatchTheirLaws) {
  struct Case {
    SamplerSpec spec;
    double var;
  };
  const std::vector<Case> cases{
      {{Family::gaussian, 1.5, 2.0}, 4.0},         {{Family::bernoulli, 0.3, 0.0}, 0.21},
      {{Family::beta, 2.0, 5.0}, 10.0 / (49 * 8)}, {{Family::laplace, 0.7, 0.0}, 2 * 0.49},
      {{Family::two_point, 1.5, 0.0}, 2.25},       {{Family::beta, 0.5, 0.5}, 0.125},
  };
  const int n = 200000;
  for (const auto& c : cases) {
    RngStream rng(9, 1);
    ScalarSampler draw(c.spec);
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = draw(rng);
      sum += x;
      sq += x * x;
    }
    const double mean = sum / n, var = sq / n - mean * mean;
    EXPECT_NEAR(mean, c.spec.mean(), 5 * std::sqrt(c.var / n)) << static_cast<int>(c.spec.family);
    EXPECT_NEAR(var / c.var, 1.0, 0.03) << static_cast<int>(c.spec.family);
  }
}

TEST(Samplers, MarkovChainPersistsAndIsStationary) {
  RngStream rng(3, 0);
  ScalarSampler draw({Family::markov, 0.1, 0.3});
  int prev = static_cast<int>(draw(rng)), switches = 0, ones = prev;
  const int n = 200000;
  for (int i = 1; i < n; ++i) {
    const int x = static_cast<int>(draw(rng));
    switches += x != prev;
    ones += x;
    prev = x;
  }
  EXPECT_NEAR(static_cast<double>(ones) / n, 0.25, 0.01);
  // Stationary switch rate: 0.75 * 0.1 + 0.25 * 0.3.
  EXPECT_NEAR(static_cast<double>(switches) / n, 0.15, 0.01);
}

TEST(Samplers, ParseAndValidate) {
  EXPECT_EQ(SamplerSpec::parse_family("laplace"), Family::laplace);
  EXPECT_THROW(SamplerSpec::parse_family("cauchy"), ConfigError);
  EXPECT_THROW(ScalarSampler({Family::gaussian, 0.0, 0.0}), ParameterError);
  EXPECT_THROW(ScalarSampler({Family::bernoulli, 1.5, 0.0}), ParameterError);
}

TEST(Samplers, BlocksAndEvents) {
  RngStream rng(4, 0);
  const auto block = twobytwo_block(rng, 0.0 + 1e-300, 1.0, 3, 2);
  ASSERT_EQ(block.size(), 5u);
  EXPECT_EQ(block, (std::vector<int>{0, 0, 0, 1, 1}));
  int treat = 0;
  for (int i = 0; i < 100000; ++i) treat += logrank_event(rng, 3, 1, std::log(2.0));
  EXPECT_NEAR(treat / 100000.0, 6.0 / 7.0, 0.01);
  EXPECT_THROW(logrank_event(rng, 0, 0, 0.0), ParameterError);
}

TEST(Enumerate, ConstantHasExpectationOne) {
  EXPECT_EQ(enumerate_exact({std::vector<double>(4, 0.5)}, [](std::span<const int>) { return 1.0L; }), 1.0L);
}

TEST(Enumerate, MeanOfBitSum) {
  const BinaryProductModel m{{0.1, 0.25, 0.9}};
  const long double e = enumerate_exact(m, [](std::span<const int> b) { return static_cast<long double>(b[0] + b[1] + b[2]); });
  EXPECT_NEAR(static_cast<double>(e), 1.25, 1e-15);
}

TEST(Enumerate, CapacityLimit) {
  EXPECT_THROW(enumerate_exact({std::vector<double>(21, 0.5)}, [](std::span<const int>) { return 1.0L; }),
               CapacityError);
  EXPECT_THROW(enumerate_count_classes(21, [](std::span<const int>) { return 1.0L; }), CapacityError);
}

TEST(Enumerate, CountClassesAverageWithinClass) {
  const auto c = enumerate_count_classes(4, [](std::span<const int> b) { return static_cast<long double>(b[0]); });
  ASSERT_EQ(c.size(), 5u);
  for (std::size_t k = 0; k <= 4; ++k) EXPECT_NEAR(static_cast<double>(c[k]), k / 4.0, 1e-15);
}

TEST(McEvalueAtStop, UnitProcessesAreExact) {
  const ConstantProcess constant;
  const auto a = mc_evalue_at_stop(constant, {Family::gaussian, 0.0, 1.0}, StoppingRuleSpec::crossing_or_fixed(2, 50),
                                   1000, 1);
  EXPECT_EQ(a.mean, 1.0);
  EXPECT_EQ(a.se, 0.0);
  const BoundedMeanBetting zero_bet(0.5, BetPolicy::fixed(0.0));
  const auto b = mc_evalue_at_stop(zero_bet, {Family::bernoulli, 0.5, 0.0}, StoppingRuleSpec::fixed(30), 1000, 1);
  EXPECT_EQ(b.mean, 1.0);
  EXPECT_EQ(b.se, 0.0);
}

TEST(McEvalueAtStop, Preconditions) {
  const ConstantProcess constant;
  EXPECT_THROW(mc_evalue_at_stop(constant, {}, StoppingRuleSpec::crossing(5), 1000, 1), ConfigError);
  EXPECT_THROW(mc_evalue_at_stop(constant, {}, StoppingRuleSpec::fixed(5), 999, 1), ConfigError);
  EXPECT_THROW(mc_evalue_at_stop(constant, {}, StoppingRuleSpec::crossing_or_fixed(0.0, 5), 1000, 1), ConfigError);
}

TEST(McEvalueAtStop, CrossingRuleStopsAtCrossing) {
  const GaussianLikelihoodRatio lr(0.0, 1.0);
  const auto runs = simulate_stopped(lr, {Family::gaussian, 1.0, 1.0}, StoppingRuleSpec::crossing_or_fixed(20, 200), 200, 2);
  for (const auto& r : runs) {
    ASSERT_LE(r.tau, 200u);
    if (r.tau < 200) {
      ASSERT_GE(r.log_value, std::log(20.0));
    }
    ASSERT_GE(r.log_running_max, r.log_value);
  }
}

TEST(McEvalueAtStop, SubGaussianMixtureUnderTheNull) {
  const SubGaussianMixtureProcess p(0.0, 1.0, 0.3);
  const auto est = mc_evalue_at_stop(p, {Family::gaussian, 0.0, 1.0}, StoppingRuleSpec::crossing_or_fixed(5, 300), 5000, 3);
  EXPECT_LE(est.mean, 1.0 + 3 * est.se);
}

TEST(Determinism, IdenticalRunsAgreeBitForBit) {
  const SymmetryProcess p(true, true);
  const auto rule = StoppingRuleSpec::crossing_or_fixed(10, 60);
  const auto a = simulate_stopped(p, {Family::laplace, 1.0, 0.0}, rule, 300, 99);
  const auto b = simulate_stopped(p, {Family::laplace, 1.0, 0.0}, rule, 300, 99);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].tau, b[i].tau);
    ASSERT_EQ(a[i].log_value, b[i].log_value);
  }
}

// Replaying a prefix of a path must reproduce every stop decision made
// within that prefix, so the rule cannot look ahead.
TEST(Property, StoppingRulesArePredictable) {
  const std::vector<StoppingRuleSpec> rules{StoppingRuleSpec::fixed(40), StoppingRuleSpec::crossing(3.0),
                                            StoppingRuleSpec::crossing_or_fixed(3.0, 25)};
  RngStream rng(6, 0);
  std::vector<double> path(60);
  double acc = 0.0;
  for (auto& v : path) v = acc += 0.2 * standard_normal(rng);
  for (const auto& rule : rules) {
    std::vector<bool> full;
    for (std::size_t t = 1; t <= path.size(); ++t) full.push_back(rule.stop(t, path[t - 1]));
    for (std::size_t cut = 1; cut <= path.size(); cut += 7) {
      std::vector<double> prefix(path.begin(), path.begin() + static_cast<long>(cut));
      for (std::size_t t = 1; t <= prefix.size(); ++t) ASSERT_EQ(rule.stop(t, prefix[t - 1]), full[t - 1]);
    }
  }
}

TEST(McCoverage, TinyAlphaNeverMisses) {
  const auto est = mc_coverage(
      [] { return std::make_unique<BandProbe>(std::make_unique<SubGaussianCS>(1.0, 0.3, 1e-6), 0.0); },
      {Family::gaussian, 0.0, 1.0}, 100, 1000, 4);
  EXPECT_EQ(est.mean, 0.0);
}

TEST(McCoverage, ConstantDataAtTheTruth) {
  const auto est = mc_coverage(
      [] { return std::make_unique<BandProbe>(std::make_unique<EmpiricalBernsteinCS>(0.05), 1.0); },
      {Family::bernoulli, 1.0, 0.0}, 200, 1000, 4);
  EXPECT_EQ(est.mean, 0.0);
}

TEST(McCoverage, TruthProbeRequiresSingleCandidate) {
  EXPECT_THROW(TruthProcessProbe(std::make_unique<BettingCS>(0.05)), ConfigError);
  EXPECT_NO_THROW(TruthProcessProbe(std::make_unique<BettingCS>(0.05, BetPolicy::plugin(), std::vector<double>{0.3})));
}

TEST(Summarize, MeanAndStandardError) {
  const std::vector<double> v{1, 2, 3, 4};
  const auto e = summarize(v);
  EXPECT_DOUBLE_EQ(e.mean, 2.5);
  EXPECT_NEAR(e.se, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
  EXPECT_EQ(e.n, 4u);
}
