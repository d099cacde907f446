#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "savi/errors.hpp"
#include "savi/nonparam.hpp"
#include "savi/sequential.hpp"
#include "savi/sim/oracle.hpp"

using namespace savi;

namespace {

// Recomputes the whole ratio from scratch for a finished sequence.
double exchangeability_oracle(const std::vector<int>& bits) {
  double log_num = 0.0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (i == 0) {
      log_num += std::log(0.5);
      continue;
    }
    int from = bits[i - 1], same = 0, total = 0;
    for (std::size_t j = 1; j < i; ++j)
      if (bits[j - 1] == from) {
        ++total;
        same += bits[j] == bits[i];
      }
    log_num += std::log((same + 1.0) / (total + 2.0));
  }
  const double k = static_cast<double>(std::count(bits.begin(), bits.end(), 1));
  const double n = static_cast<double>(bits.size());
  double log_den = 0.0;
  if (k > 0) log_den += k * std::log(k / n);
  if (k < n) log_den += (n - k) * std::log((n - k) / n);
  return log_num - log_den;
}

double run_exchangeability(const std::vector<int>& bits) {
  BinarySequenceState s;
  double v = 1.0;
  for (int b : bits) {
    auto u = exchangeability_eprocess_step(s, b);
    s = u.state;
    v = u.value;
  }
  return v;
}

}  // namespace

// ---- symmetry --------------------------------------------------------------------

TEST(Symmetry, ZeroObservationIsNeutral) {
  EXPECT_EQ(raw_symmetry_bet(0.0, 1.0), 1.0);
  EXPECT_EQ(rectified_symmetry_bet(0.0, 1.0), 1.0);
}

TEST(Symmetry, RawBetExample) { EXPECT_NEAR(raw_symmetry_bet(1.0, 1.0), std::exp(0.5), 1e-15); }

TEST(Symmetry, RectifiedMatchesOddPartFormula) {
  for (double l : {0.25, 0.5, 1.0, 2.0})
    for (double x : {-3.0, -1.0, -0.1, 0.4, 1.3, 5.0}) {
      const double want = 1.0 + 0.5 * (raw_symmetry_bet(x, l) - raw_symmetry_bet(-x, l));
      EXPECT_NEAR(rectified_symmetry_bet(x, l), want, 1e-13) << l << " " << x;
    }
}

TEST(Symmetry, RectifiedExcessIsOdd) {
  for (double l : {0.25, 0.5, 1.0, 2.0})
    for (int i = 0; i <= 2000; ++i) {
      const double x = -10.0 + i * 0.01;
      EXPECT_NEAR((rectified_symmetry_bet(x, l) - 1) + (rectified_symmetry_bet(-x, l) - 1), 0.0, 1e-14);
    }
}

TEST(Symmetry, RectifiedDominatesRawOnGrid) {
  std::size_t violations = 0;
  for (double l : {0.25, 0.5, 1.0, 2.0})
    for (int i = 0; i < 10000; ++i) {
      const double x = -20.0 + 40.0 * i / 9999.0;
      violations += rectified_symmetry_bet(x, l) < raw_symmetry_bet(x, l);
      violations += rectified_symmetry_bet(x, l) < 0.0;
    }
  EXPECT_EQ(violations, 0u);
}

TEST(Symmetry, PathwiseDominanceOnSymmetricStream) {
  std::mt19937_64 gen(31);
  std::normal_distribution<double> z;
  WealthLedger raw, rect;
  for (int i = 0; i < 100; ++i) {
    const double x = z(gen);
    raw = symmetry_step(raw, x, {1.0, false});
    rect = symmetry_step(rect, x, {1.0, true});
    ASSERT_GE(rect.log_wealth(), raw.log_wealth());
  }
}

TEST(Symmetry, MixtureOfOneLambdaIsThatLambda) {
  auto mix = SymmetryTest::mixture(true, {0.5});
  SymmetryTest single({0.5, true});
  for (double x : {0.3, -1.2, 2.0, 0.01}) {
    mix.observe(x);
    single.observe(x);
  }
  EXPECT_NEAR(mix.log_value(), single.log_value(), 1e-14);
  EXPECT_GE(mix.running_max_log_value(), mix.log_value());
}

TEST(Symmetry, DetectsPositiveShift) {
  auto t = SymmetryTest::mixture(true);
  std::mt19937_64 gen(3);
  std::normal_distribution<double> z(0.7, 1.0);
  for (int i = 0; i < 200; ++i) t.observe(z(gen));
  EXPECT_GT(t.log_value(), std::log(20.0));
}

TEST(Symmetry, MonteCarloMeanAtFixedHorizon) {
  const std::vector<sim::SamplerSpec> laws{
      {sim::Family::gaussian, 0.0, 1.0}, {sim::Family::laplace, 1.0, 0.0}, {sim::Family::two_point, 1.5, 0.0}};
  for (const auto& law : laws)
    for (bool rectified : {false, true}) {
      const SymmetryProcess proto(rectified, false, 1.0);
      const auto est = sim::mc_evalue_at_stop(proto, law, sim::StoppingRuleSpec::fixed(20), 4000, 77);
      EXPECT_LE(est.mean, 1.0 + 3 * est.se) << static_cast<int>(law.family) << " " << rectified;
    }
}

// ---- exchangeability -----------------------------------------------------------

TEST(Exchangeability, SingleBitIsHalf) {
  for (int b : {0, 1}) EXPECT_NEAR(run_exchangeability({b}), 0.5, 1e-15);
}

TEST(Exchangeability, ConstantRunOfFour) {
  // Markov add-one smoothing: 1/2 for the first bit, then 1/2, 2/3, 3/4 for the
  // repeated 1 -> 1 transitions.
  EXPECT_NEAR(run_exchangeability({1, 1, 1, 1}), 0.125, 1e-15);
  EXPECT_LE(run_exchangeability({1, 1, 1, 1}), 1.0);
}

TEST(Exchangeability, AlternationIsEvidence) {
  std::vector<int> bits(20);
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = static_cast<int>(i % 2);
  const double v = run_exchangeability(bits);
  EXPECT_GT(v, 1.0);
  EXPECT_NEAR(std::log(v), exchangeability_oracle(bits), 1e-12);
}

TEST(Exchangeability, MatchesOracleOnRandomSequences) {
  std::mt19937_64 gen(9);
  std::bernoulli_distribution coin(0.4);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<int> bits(1 + rep % 37);
    for (auto& b : bits) b = coin(gen);
    EXPECT_NEAR(std::log(run_exchangeability(bits)), exchangeability_oracle(bits), 1e-11);
  }
}

TEST(Exchangeability, StateCountsStayConsistent) {
  BinarySequenceState s;
  std::mt19937_64 gen(1);
  std::bernoulli_distribution coin(0.5);
  for (int t = 1; t <= 300; ++t) {
    s = exchangeability_eprocess_step(s, coin(gen)).state;
    ASSERT_EQ(s.step_count(), static_cast<std::size_t>(t));
    const auto& tc = s.transition_counts;
    ASSERT_EQ(tc[0][0] + tc[0][1] + tc[1][0] + tc[1][1], static_cast<std::size_t>(t - 1));
  }
}

TEST(Exchangeability, RejectsNonBits) {
  EXPECT_THROW(exchangeability_eprocess_step({}, 2), DataError);
  EXPECT_THROW(exchangeability_eprocess_step({}, -1), DataError);
  ExchangeabilityProcess p;
  EXPECT_THROW(p.observe(0.5), DataError);
}

TEST(Exchangeability, ExhaustiveCountClassesUpToTwelve) {
  for (std::size_t n = 1; n <= 12; ++n) {
    const auto classes = sim::enumerate_count_classes(n, [](std::span<const int> bits) {
      return static_cast<long double>(run_exchangeability({bits.begin(), bits.end()}));
    });
    for (std::size_t k = 0; k <= n; ++k) EXPECT_LE(classes[k], 1.0L) << "n=" << n << " k=" << k;
  }
}

TEST(Exchangeability, IidMonteCarloUnderStoppingRules) {
  const ExchangeabilityProcess proto;
  const std::vector<sim::StoppingRuleSpec> rules{sim::StoppingRuleSpec::fixed(50),
                                                 sim::StoppingRuleSpec::crossing_or_fixed(2.0, 100)};
  for (double p : {0.1, 0.5, 0.9})
    for (const auto& rule : rules) {
      const auto est = sim::mc_evalue_at_stop(proto, {sim::Family::bernoulli, p, 0.0}, rule, 4000, 101);
      EXPECT_LE(est.mean, 1.0 + 3 * est.se) << p;
    }
}

TEST(Exchangeability, PersistentChainGrowsEvidence) {
  const ExchangeabilityProcess proto;
  const auto runs =
      sim::simulate_stopped(proto, {sim::Family::markov, 0.05, 0.05}, sim::StoppingRuleSpec::fixed(200), 201, 5);
  std::vector<double> logs;
  for (const auto& r : runs) logs.push_back(r.log_value);
  std::nth_element(logs.begin(), logs.begin() + 100, logs.end());
  EXPECT_GT(logs[100], 0.0);
}
