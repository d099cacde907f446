#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "savi/conf_seq.hpp"
#include "savi/eprocess.hpp"

namespace savi {

// ---- t-test ------------------------------------------------------------------

/// log of J_n(z) = integral_0^inf v^(n-1) exp(-v^2/2 + z v) dv, n >= 1.
double log_haar_integral(std::size_t n, double z);

/// log of the ratio of the two right-Haar marginal densities of x_1..x_n for
/// N(delta sigma, sigma^2) data, from the sufficient statistics
/// (n, sum x, sum x^2). Requires sum_sq > 0.
double log_haar_marginal_ratio(std::size_t n, double sum, double sum_sq, double delta0, double delta1);

/// Scale-invariant sequential t-test of effect size delta0 against delta1.
/// Leading exact zeros are skipped (the scale-free reduction is undefined
/// until a nonzero value arrives); skipped_leading_zeros() counts them.
class TTest {
 public:
  TTest(double delta0, double delta1);

  void observe(double x);
  double log_wealth() const noexcept { return ledger_.log_wealth(); }
  const WealthLedger& ledger() const noexcept { return ledger_; }
  std::size_t count() const noexcept { return n_; }
  std::size_t skipped_leading_zeros() const noexcept { return skipped_; }

 private:
  double delta0_, delta1_;
  std::size_t n_ = 0, skipped_ = 0;
  // Extended accumulators: cancellation in the running sum otherwise shows up
  // at the 1e-12 level in log wealth after a few hundred steps.
  long double sum_ = 0.0L, sum_sq_ = 0.0L;
  WealthLedger ledger_;
};

// ---- 2x2 tables ------------------------------------------------------------

/// One block: the first n_a bits are group a, the remaining n_b group b.
struct TwoByTwoBlock {
  int n_a = 0;
  int n_b = 0;
  std::vector<int> outcomes;

  void validate() const;  // throws DataError
  int ones_a() const;
  int ones_b() const;
};

/// Block e-variable for the null theta_a = theta_b, tuned to (theta_a, theta_b).
double log_twobytwo_block_evalue(int n_a, int n_b, int ones_a, int ones_b, double theta_a, double theta_b);
EValue twobytwo_block_evalue(const TwoByTwoBlock& block, double theta_a, double theta_b);

/// Discrete prior on a scalar parameter.
struct DiscretePrior {
  std::vector<double> points;
  std::vector<double> weights;
  void validate() const;
};

/// Discrete prior on (theta_a, theta_b).
struct PairPrior {
  std::vector<std::pair<double, double>> points;
  std::vector<double> weights;
  void validate() const;  // points in (0,1)^2, convex weights
};

/// Uniform prior on {k / (m + 1) : k = 1..m}^2; m = 9 gives {0.1, ..., 0.9}^2.
PairPrior uniform_pair_prior(std::size_t m);

/// Beta(a, b) x Beta(a, b) discretised on the m x m midpoint grid.
PairPrior beta_pair_prior(double a, double b, std::size_t m);

/// Mixture over (theta_a, theta_b) of block e-processes, maintained exactly
/// as per-component log wealths.
class TwoByTwoMixture {
 public:
  TwoByTwoMixture(PairPrior prior, int n_a, int n_b);
  void observe(const TwoByTwoBlock& block);
  void observe_counts(int ones_a, int ones_b);
  double log_value() const;
  std::size_t blocks() const noexcept { return blocks_; }
  int n_a() const noexcept { return n_a_; }
  int n_b() const noexcept { return n_b_; }
  /// log S for component k at outcome counts (ones_a, ones_b).
  double log_s(std::size_t k, int ones_a, int ones_b) const;

 private:
  PairPrior prior_;
  int n_a_, n_b_;
  std::vector<double> table_;  // [k][ones_a][ones_b]
  std::vector<double> log_w_;
  std::size_t blocks_ = 0;
};

/// Alternatives at distance delta around the centre: theta_b - theta_a = delta
/// with the midpoint on an even grid inside (0, 1).
std::vector<std::pair<double, double>> regrow_alternatives(double delta, std::size_t n = 11);

struct RegrowCandidate {
  std::string label;
  PairPrior prior;
};

struct RegrowConfig {
  int n_a = 5;
  int n_b = 5;
  std::size_t horizon = 20;  // blocks per replication
  std::size_t replications = 2000;
  std::uint64_t seed = 1;
};

/// Fixed-horizon surrogate for the worst-case relative growth criterion.
struct RegrowResult {
  std::size_t best = 0;
  /// Per candidate: min over alternatives of E[log M_prior - log M_truth].
  std::vector<double> worst_case;
  std::vector<double> worst_case_se;
  std::vector<std::size_t> worst_alternative;
};

/// Expectations use common random numbers: every candidate sees the same
/// simulated blocks. Throws ParameterError for an empty candidate list.
RegrowResult regrow_beta_prior_search(std::span<const RegrowCandidate> candidates,
                                      std::span<const std::pair<double, double>> alternatives,
                                      const RegrowConfig& config);

/// Hyperparameter candidates Beta(a, b) x Beta(a, b), a and b from the lists.
std::vector<RegrowCandidate> beta_prior_candidates(std::span<const double> a_values,
                                                   std::span<const double> b_values, std::size_t m = 10);

/// Universal-inference CS for theta_b - theta_a: numerator is the Bayes
/// marginal under a pair prior, denominator the likelihood maximised over the
/// nuisance theta_a with the difference fixed.
class TwoByTwoDifferenceCS {
 public:
  TwoByTwoDifferenceCS(double alpha, PairPrior prior, MeanGridSpec delta_grid = {-0.99, 0.99, 199});
  void observe(const TwoByTwoBlock& block);
  ConfidenceBand band() const;
  double log_value(double delta) const;
  const std::vector<double>& deltas() const noexcept { return deltas_; }

 private:
  double alpha_;
  PairPrior prior_;
  std::vector<double> deltas_;
  long a1_ = 0, a0_ = 0, b1_ = 0, b0_ = 0;
  std::size_t blocks_ = 0;
};

/// max over theta_a of the log likelihood with theta_b = theta_a + delta.
double profile_log_likelihood(long a1, long a0, long b1, long b0, double delta);

// ---- logrank -----------------------------------------------------------------

struct RiskSetState {
  int n_treat = 0;
  int n_ctrl = 0;
  double beta = 0.0;
};

struct LogrankUpdate {
  RiskSetState state;
  UnitBet bet;
};

/// Probability that the next event is in the treatment group.
double logrank_alternative_prob(int n_treat, int n_ctrl, double beta);

/// event_group: 1 = treatment, 0 = control. Throws DataError if that group is
/// empty or the bit is not 0/1.
LogrankUpdate logrank_step(RiskSetState state, int event_group);

// ---- prior-posterior ratio -------------------------------------------------

enum class LikelihoodModel { bernoulli, gaussian };

/// pi_0(theta) / pi_t(theta) for every grid point, from exact discrete Bayes.
class PriorPosteriorRatio {
 public:
  PriorPosteriorRatio(DiscretePrior prior, LikelihoodModel model, double sigma = 1.0);

  /// Returns the log increment at each grid point, computed from the
  /// posterior predictive before x: log(p_mix(x) / p_theta(x)).
  std::vector<double> observe(double x);
  double log_ratio(std::size_t index) const;
  std::vector<double> log_ratios() const;
  /// Posterior probabilities (normalised directly from likelihood products).
  std::vector<double> posterior() const;
  const DiscretePrior& prior() const noexcept { return prior_; }
  std::size_t time() const noexcept { return t_; }

 private:
  double log_lik(double theta, double x) const;

  DiscretePrior prior_;
  LikelihoodModel model_;
  double sigma_;
  std::vector<double> loglik_;
  std::size_t t_ = 0;
};

/// Hull of {theta : wealth(theta) < 1/alpha}; empty flag when nothing survives.
ConfidenceBand eposterior_interval(std::span<const double> thetas, std::span<const double> log_wealths, double alpha);

/// Hull of {theta : p_theta(x) / p_mix(x) >= k}, from posterior over prior.
ConfidenceBand support_interval(std::span<const double> thetas, std::span<const double> prior_weights,
                                std::span<const double> posterior, double k);

}  // namespace savi
