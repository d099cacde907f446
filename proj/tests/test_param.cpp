#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "savi/errors.hpp"
#include "savi/param.hpp"
#include "savi/sequential.hpp"
#include "savi/sim/oracle.hpp"
#include "savi/sim/samplers.hpp"

using namespace savi;

namespace {

std::vector<double> normal_stream(std::size_t n, double mean, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z(mean, 1.0);
  std::vector<double> xs(n);
  for (auto& x : xs) x = z(gen);
  return xs;
}

double quadrature_log_ratio(const std::vector<double>& xs, double d0, double d1) {
  double s = 0.0, ss = 0.0;
  for (double x : xs) {
    s += x;
    ss += x * x;
  }
  return oracle::log_haar_marginal(xs.size(), s, ss, d1) - oracle::log_haar_marginal(xs.size(), s, ss, d0);
}

// Direct product of the block formula, written out per outcome.
double block_oracle(int na, int nb, int oa, int ob, double ta, double tb) {
  auto p = [](double th, int y) { return y ? th : 1 - th; };
  const double wa = static_cast<double>(na) / (na + nb), wb = 1 - wa;
  double num = 1.0, den = 1.0;
  for (int i = 0; i < na; ++i) {
    const int y = i < oa;
    num *= p(ta, y);
    den *= wa * p(ta, y) + wb * p(tb, y);
  }
  for (int i = 0; i < nb; ++i) {
    const int y = i < ob;
    num *= p(tb, y);
    den *= wa * p(ta, y) + wb * p(tb, y);
  }
  return num / den;
}

}  // namespace

// ---- t-test ----------------------------------------------------------------------

TEST(HaarIntegral, MatchesQuadrature) {
  for (std::size_t n : {1u, 2u, 3u, 7u, 20u, 100u, 1000u})
    for (double z : {-30.0, -5.0, -1.0, 0.0, 0.5, 3.0, 25.0}) {
      const double closed = log_haar_integral(n, z), quad = oracle::log_haar_integral(n, z);
      EXPECT_NEAR(closed, quad, 1e-9 * std::max(1.0, std::abs(quad))) << "n=" << n << " z=" << z;
    }
  EXPECT_THROW(log_haar_integral(0, 1.0), ParameterError);
}

TEST(TTest, EqualEffectsGiveUnitWealth) {
  TTest t(0.3, 0.3);
  for (double x : normal_stream(50, 1.0, 1)) {
    t.observe(x);
    ASSERT_EQ(t.log_wealth(), 0.0);
  }
}

TEST(TTest, ScaleInvariantPaths) {
  const auto xs = normal_stream(200, 0.4, 2);
  TTest base(0.0, 0.5);
  std::vector<double> path;
  for (double x : xs) {
    base.observe(x);
    path.push_back(base.log_wealth());
  }
  for (double c : {1e-3, 7.3, 1e3}) {
    TTest scaled(0.0, 0.5);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      scaled.observe(c * xs[i]);
      ASSERT_NEAR(scaled.log_wealth(), path[i], 1e-12) << "c=" << c << " i=" << i;
    }
  }
}

TEST(TTest, TenObservationsAgainstQuadrature) {
  const std::vector<double> xs{0.8, -0.3, 1.4, 0.2, 0.9, -1.1, 0.6, 1.9, 0.05, 0.7};
  TTest t(0.0, 0.5);
  for (double x : xs) t.observe(x);
  const double q = quadrature_log_ratio(xs, 0.0, 0.5);
  EXPECT_NEAR(std::exp(t.log_wealth() - q), 1.0, 1e-6);
}

TEST(TTest, RandomStreamsAgainstQuadrature) {
  std::mt19937_64 gen(44);
  std::uniform_real_distribution<double> u(0, 1);
  for (int rep = 0; rep < 50; ++rep) {
    const auto n = static_cast<std::size_t>(2 + 300 * u(gen));
    const auto xs = normal_stream(n, 2 * u(gen) - 0.5, static_cast<unsigned>(rep + 100));
    const double d0 = u(gen) - 0.5, d1 = d0 + 0.2 + u(gen);
    TTest t(d0, d1);
    for (double x : xs) t.observe(x);
    EXPECT_NEAR(t.log_wealth(), quadrature_log_ratio(xs, d0, d1), 1e-6) << rep;
  }
}

TEST(TTest, LeadingZerosAreSkipped) {
  TTest a(0.0, 0.5), b(0.0, 0.5);
  for (double x : {0.0, 0.0, 1.2, 0.0, -0.4}) a.observe(x);
  for (double x : {1.2, 0.0, -0.4}) b.observe(x);
  EXPECT_EQ(a.skipped_leading_zeros(), 2u);
  EXPECT_EQ(a.count(), 3u);
  EXPECT_EQ(a.log_wealth(), b.log_wealth());
  EXPECT_THROW(a.observe(std::nan("")), DataError);
}

TEST(TTest, NullMonteCarloAtFixedHorizon) {
  const TTestProcess proto(0.0, 0.5);
  const auto est =
      sim::mc_evalue_at_stop(proto, {sim::Family::gaussian, 0.0, 2.5}, sim::StoppingRuleSpec::fixed(30), 4000, 9);
  EXPECT_LE(est.mean, 1.0 + 3 * est.se);
}

TEST(TTest, DetectsAnEffect) {
  TTest t(0.0, 0.5);
  for (double x : normal_stream(200, 0.6, 12)) t.observe(x);
  EXPECT_GT(t.log_wealth(), std::log(20.0));
}

// ---- 2x2 tables --------------------------------------------------------------------

TEST(TwoByTwo, DiagonalTuningIsUnit) {
  for (int oa = 0; oa <= 3; ++oa)
    for (int ob = 0; ob <= 2; ++ob) EXPECT_NEAR(log_twobytwo_block_evalue(3, 2, oa, ob, 0.4, 0.4), 0.0, 1e-15);
}

TEST(TwoByTwo, HandExample) {
  const TwoByTwoBlock block{1, 1, {1, 0}};
  EXPECT_NEAR(twobytwo_block_evalue(block, 0.8, 0.2).value, 2.56, 1e-14);
}

TEST(TwoByTwo, MatchesPerOutcomeFormula) {
  for (int na = 1; na <= 4; ++na)
    for (int nb = 1; nb <= 4; ++nb)
      for (int oa = 0; oa <= na; ++oa)
        for (int ob = 0; ob <= nb; ++ob)
          EXPECT_NEAR(std::exp(log_twobytwo_block_evalue(na, nb, oa, ob, 0.7, 0.15)),
                      block_oracle(na, nb, oa, ob, 0.7, 0.15), 1e-12);
}

TEST(TwoByTwo, ParameterAndDataErrors) {
  EXPECT_THROW(log_twobytwo_block_evalue(1, 1, 0, 0, 0.0, 0.5), ParameterError);
  EXPECT_THROW(log_twobytwo_block_evalue(1, 1, 0, 0, 0.5, 1.0), ParameterError);
  EXPECT_THROW((TwoByTwoBlock{2, 1, {1, 0}}.validate()), DataError);
  EXPECT_THROW((TwoByTwoBlock{1, 1, {1, 2}}.validate()), DataError);
}

TEST(TwoByTwo, ExhaustiveNullExpectation) {
  long double worst = 0.0L;
  for (int na = 1; na <= 4; ++na)
    for (int nb = 1; nb <= 4; ++nb)
      for (int i = 1; i <= 9; ++i)
        for (int j = 1; j <= 9; ++j) {
          const double ta = i / 10.0, tb = j / 10.0;
          for (int k = 1; k <= 9; ++k) {
            sim::BinaryProductModel model{std::vector<double>(static_cast<std::size_t>(na + nb), k / 10.0)};
            const long double e = sim::enumerate_exact(model, [&](std::span<const int> bits) {
              TwoByTwoBlock b{na, nb, {bits.begin(), bits.end()}};
              return static_cast<long double>(twobytwo_block_evalue(b, ta, tb).value);
            });
            worst = std::max(worst, e);
          }
        }
  EXPECT_LE(worst, 1.0L + 1e-12L);
}

TEST(TwoByTwoMixture, SinglePointIsProduct) {
  PairPrior prior{{{0.7, 0.2}}, {1.0}};
  TwoByTwoMixture m(prior, 2, 3);
  double log_prod = 0.0;
  const std::vector<TwoByTwoBlock> blocks{{2, 3, {1, 1, 0, 0, 1}}, {2, 3, {0, 1, 0, 0, 0}}, {2, 3, {1, 0, 1, 1, 0}}};
  for (const auto& b : blocks) {
    m.observe(b);
    log_prod += std::log(twobytwo_block_evalue(b, 0.7, 0.2).value);
  }
  EXPECT_NEAR(m.log_value(), log_prod, 1e-13);
  EXPECT_EQ(m.blocks(), 3u);
}

TEST(TwoByTwoMixture, PriorShapes) {
  const auto u = uniform_pair_prior(9);
  ASSERT_EQ(u.points.size(), 81u);
  EXPECT_DOUBLE_EQ(u.points.front().first, 0.1);
  EXPECT_DOUBLE_EQ(u.points.back().second, 0.9);
  const auto b = beta_pair_prior(2.0, 2.0, 10);
  double s = 0.0;
  for (double w : b.weights) s += w;
  EXPECT_NEAR(s, 1.0, 1e-13);
  EXPECT_THROW(beta_pair_prior(0.0, 1.0, 5), ParameterError);
}

TEST(TwoByTwoMixture, NullMonteCarlo) {
  const auto prior = uniform_pair_prior(9);
  std::vector<double> values;
  for (std::uint64_t r = 0; r < 2000; ++r) {
    sim::RngStream rng(13, r);
    TwoByTwoMixture m(prior, 5, 5);
    for (int t = 0; t < 20; ++t) m.observe({5, 5, sim::twobytwo_block(rng, 0.5, 0.5, 5, 5)});
    values.push_back(std::exp(m.log_value()));
  }
  const auto est = sim::summarize(values);
  EXPECT_LE(est.mean, 1.0 + 3 * est.se);
}

TEST(TwoByTwoMixture, StrongEffectGrows) {
  const auto prior = uniform_pair_prior(9);
  std::vector<double> logs;
  for (std::uint64_t r = 0; r < 101; ++r) {
    sim::RngStream rng(14, r);
    TwoByTwoMixture m(prior, 5, 5);
    for (int t = 0; t < 50; ++t) m.observe({5, 5, sim::twobytwo_block(rng, 0.9, 0.1, 5, 5)});
    logs.push_back(m.log_value());
  }
  std::nth_element(logs.begin(), logs.begin() + 50, logs.end());
  EXPECT_GT(logs[50], 0.0);
}

TEST(Regrow, SingleCandidateIsReturned) {
  const std::vector<RegrowCandidate> one{{"only", beta_pair_prior(1, 1, 5)}};
  const auto alts = regrow_alternatives(0.4, 3);
  const auto r = regrow_beta_prior_search(one, alts, {2, 2, 5, 50, 1});
  EXPECT_EQ(r.best, 0u);
  EXPECT_THROW(regrow_beta_prior_search({}, alts, {}), ParameterError);
}

TEST(Regrow, DominantPriorWins) {
  // A prior on the alternatives themselves loses at most log(#alternatives)
  // against the truth; a point mass on the null diagonal loses the full growth.
  const auto alts = regrow_alternatives(0.6, 5);
  PairPrior on_alts, on_null{{{0.5, 0.5}}, {1.0}};
  for (const auto& a : alts) {
    on_alts.points.push_back(a);
    on_alts.weights.push_back(1.0 / alts.size());
  }
  const std::vector<RegrowCandidate> cands{{"null", on_null}, {"alts", on_alts}};
  const auto r = regrow_beta_prior_search(cands, alts, {5, 5, 20, 200, 3});
  EXPECT_EQ(r.best, 1u);
  EXPECT_GE(r.worst_case[1], -std::log(5.0) - 1e-12);
}

TEST(Regrow, ReproducibleAndSeedStable) {
  const std::vector<double> hyper{0.5, 1.0, 2.0, 4.0, 8.0};
  const auto cands = beta_prior_candidates(hyper, hyper, 6);
  ASSERT_EQ(cands.size(), 25u);
  const auto alts = regrow_alternatives(0.4, 11);
  const RegrowConfig cfg{5, 5, 20, 2000, 1};
  const auto a = regrow_beta_prior_search(cands, alts, cfg);
  const auto b = regrow_beta_prior_search(cands, alts, cfg);
  EXPECT_EQ(a.best, b.best);
  EXPECT_EQ(a.worst_case, b.worst_case);
  auto other = cfg;
  other.seed = 2;
  const auto c = regrow_beta_prior_search(cands, alts, other);
  const double se = std::hypot(a.worst_case_se[a.best], c.worst_case_se[a.best]);
  EXPECT_LT(std::abs(a.worst_case[a.best] - c.worst_case[a.best]), 2 * se);
}

TEST(TwoByTwoDifference, CoversTruthOnSimulatedBlocks) {
  TwoByTwoDifferenceCS cs(0.05, uniform_pair_prior(9));
  sim::RngStream rng(5, 0);
  for (int t = 0; t < 100; ++t) cs.observe({4, 4, sim::twobytwo_block(rng, 0.3, 0.6, 4, 4)});
  const auto b = cs.band();
  EXPECT_TRUE(b.contains(0.3));
  EXPECT_FALSE(b.contains(0.0));
}

TEST(TwoByTwoDifference, ProfileLikelihoodBeatsAnyFeasiblePoint) {
  const double d = 0.2;
  const double best = profile_log_likelihood(7, 3, 9, 1, d);
  for (int i = 1; i < 80; ++i) {
    const double ta = i / 100.0, tb = ta + d;
    const double ll = 7 * std::log(ta) + 3 * std::log1p(-ta) + 9 * std::log(tb) + std::log1p(-tb);
    EXPECT_GE(best, ll - 1e-10);
  }
}

// ---- logrank ---------------------------------------------------------------------

TEST(Logrank, NullBetIsOne) {
  for (int g : {0, 1}) EXPECT_DOUBLE_EQ(logrank_step({4, 7, 0.0}, g).bet.value, 1.0);
}

TEST(Logrank, HandExample) {
  const auto u = logrank_step({10, 10, -1.0}, 0);
  EXPECT_NEAR(u.bet.value, 2.0 / (1.0 + std::exp(-1.0)), 1e-15);
  EXPECT_NEAR(u.bet.value, 1.462, 5e-4);
  EXPECT_EQ(u.state.n_ctrl, 9);
  EXPECT_EQ(u.state.n_treat, 10);
}

TEST(Logrank, ExactOneStepMartingale) {
  for (int nt = 0; nt <= 6; ++nt)
    for (int nc = 0; nc <= 6; ++nc) {
      if (nt + nc == 0) continue;
      for (double beta : {-1.0, 0.0, 1.0}) {
        double e = 0.0;
        if (nt > 0) e += nt / double(nt + nc) * logrank_step({nt, nc, beta}, 1).bet.value;
        if (nc > 0) e += nc / double(nt + nc) * logrank_step({nt, nc, beta}, 0).bet.value;
        EXPECT_NEAR(e, 1.0, 1e-12) << nt << "," << nc << "," << beta;
      }
    }
}

TEST(Logrank, EmptyGroupIsDataError) {
  EXPECT_THROW(logrank_step({0, 3, 1.0}, 1), DataError);
  EXPECT_THROW(logrank_step({3, 0, 1.0}, 0), DataError);
  EXPECT_THROW(logrank_step({3, 3, 1.0}, 2), DataError);
}

TEST(Logrank, ProcessExpectationByEnumerationOfPaths) {
  // Depth-first over all event orders from (3, 4): expectation of the product is 1.
  std::function<double(RiskSetState, int)> walk = [&](RiskSetState s, int depth) -> double {
    if (depth == 0 || s.n_treat + s.n_ctrl == 0) return 1.0;
    double e = 0.0;
    const double n = s.n_treat + s.n_ctrl;
    for (int g : {0, 1}) {
      const int at_risk = g ? s.n_treat : s.n_ctrl;
      if (at_risk == 0) continue;
      const auto u = logrank_step(s, g);
      e += at_risk / n * u.bet.value * walk(u.state, depth - 1);
    }
    return e;
  };
  for (double beta : {-1.0, 0.5, 2.0}) EXPECT_NEAR(walk({3, 4, beta}, 6), 1.0, 1e-12);
}

// ---- prior-posterior ratio -------------------------------------------------------

TEST(PriorPosterior, StartsAtOne) {
  PriorPosteriorRatio r({{0.2, 0.5, 0.8}, {0.3, 0.3, 0.4}}, LikelihoodModel::bernoulli);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(r.log_ratio(i), 0.0);
}

TEST(PriorPosterior, TwoPointExample) {
  PriorPosteriorRatio r({{0.3, 0.7}, {0.5, 0.5}}, LikelihoodModel::bernoulli);
  r.observe(1.0);
  const auto post = r.posterior();
  EXPECT_NEAR(post[0], 0.3, 1e-15);
  EXPECT_NEAR(post[1], 0.7, 1e-15);
  EXPECT_NEAR(std::exp(r.log_ratio(1)), 0.5 / 0.7, 1e-15);
}

TEST(PriorPosterior, IncrementsTelescope) {
  const DiscretePrior prior{{-1.0, 0.0, 0.5, 2.0}, {0.1, 0.4, 0.3, 0.2}};
  PriorPosteriorRatio r(prior, LikelihoodModel::gaussian, 1.5);
  std::vector<double> acc(4, 0.0);
  for (double x : normal_stream(300, 0.4, 8)) {
    const auto inc = r.observe(x);
    for (std::size_t i = 0; i < 4; ++i) acc[i] += inc[i];
  }
  const auto post = r.posterior();
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(acc[i], r.log_ratio(i), 1e-9);
    EXPECT_NEAR(r.log_ratio(i), std::log(prior.weights[i] / post[i]), 1e-9 * std::max(1.0, std::abs(acc[i])));
  }
}

TEST(PriorPosterior, ZeroMassIsRejected) {
  PriorPosteriorRatio r({{0.3, 0.7}, {1.0, 0.0}}, LikelihoodModel::bernoulli);
  EXPECT_NO_THROW(r.log_ratio(0));
  EXPECT_THROW(r.log_ratio(1), ParameterError);
  EXPECT_THROW(PriorPosteriorRatio({{0.3, 1.2}, {0.5, 0.5}}, LikelihoodModel::bernoulli), ParameterError);
}

TEST(PriorPosterior, MonteCarloAtGridPoint) {
  const DiscretePrior prior{{0.2, 0.4, 0.6, 0.8}, {0.25, 0.25, 0.25, 0.25}};
  std::vector<double> values;
  for (std::uint64_t r = 0; r < 4000; ++r) {
    sim::RngStream rng(21, r);
    PriorPosteriorRatio pp(prior, LikelihoodModel::bernoulli);
    for (int t = 0; t < 30; ++t) pp.observe(sim::bernoulli(rng, 0.4));
    values.push_back(std::exp(pp.log_ratio(1)));
  }
  const auto est = sim::summarize(values);
  EXPECT_LE(est.mean, 1.0 + 3 * est.se);
}

TEST(EPosteriorInterval, BoundaryConventions) {
  const std::vector<double> thetas{0.1, 0.2, 0.3};
  const std::vector<double> zero(3, 0.0);
  const auto full = eposterior_interval(thetas, zero, 0.05);
  EXPECT_EQ(full.lower, 0.1);
  EXPECT_EQ(full.upper, 0.3);
  const std::vector<double> one_out{0.0, 0.0, std::log(20.0)};
  const auto cut = eposterior_interval(thetas, one_out, 0.05);
  EXPECT_EQ(cut.upper, 0.2);
  const std::vector<double> all_out(3, 10.0);
  EXPECT_TRUE(eposterior_interval(thetas, all_out, 0.05).empty);
}

TEST(EPosteriorInterval, EqualsSupportInterval) {
  const std::size_t m = 49;
  DiscretePrior prior;
  for (std::size_t i = 1; i <= m; ++i) {
    prior.points.push_back(i / 50.0);
    prior.weights.push_back(1.0 / m);
  }
  std::mt19937_64 gen(6);
  std::bernoulli_distribution coin(0.35);
  PriorPosteriorRatio r(prior, LikelihoodModel::bernoulli);
  for (int t = 1; t <= 200; ++t) {
    r.observe(coin(gen));
    const auto logs = r.log_ratios();
    // Flip sign: wealth against theta is prior over posterior.
    const auto e = eposterior_interval(prior.points, logs, 0.05);
    const auto s = support_interval(prior.points, prior.weights, r.posterior(), 0.05);
    ASSERT_EQ(e.empty, s.empty);
    ASSERT_EQ(e.lower, s.lower) << t;
    ASSERT_EQ(e.upper, s.upper) << t;
  }
}

TEST(EPosteriorInterval, CoverageOnBernoulliGrid) {
  DiscretePrior prior;
  for (int i = 1; i <= 19; ++i) {
    prior.points.push_back(i / 20.0);
    prior.weights.push_back(1.0 / 19);
  }
  int covered = 0;
  const int reps = 10000;
  for (int rep = 0; rep < reps; ++rep) {
    sim::RngStream rng(31, static_cast<std::uint64_t>(rep));
    PriorPosteriorRatio r(prior, LikelihoodModel::bernoulli);
    for (int t = 0; t < 100; ++t) r.observe(sim::bernoulli(rng, 0.5));
    covered += eposterior_interval(prior.points, r.log_ratios(), 0.05).contains(0.5);
  }
  EXPECT_GE(covered, 0.95 * reps);
}
