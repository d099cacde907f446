#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace savi {

/// Which way a one-sided bet leans: upper bets that the mean exceeds the
/// candidate (lambda >= 0), lower bets that it falls short (lambda <= 0).
enum class Side { upper, lower };

/// Closed interval of admissible lambda values for one supermartingale family.
struct LegalRange {
  double lo = 0.0;
  double hi = 0.0;

  double clamp(double lambda) const noexcept;
  bool contains(double lambda) const noexcept { return lambda >= lo && lambda <= hi; }
};

/// [-c/(1-mu), c/mu] for bets of the form 1 + lambda (x - mu), x in [0,1].
/// Every lambda in this range keeps the round factor at least 1 - c.
LegalRange bounded_range(double mu, double c);

/// Predictable summaries of X_1..X_n for plug-in rules. Both estimates are
/// shrunk toward the centre of [0,1] by one pseudo-observation (mean 1/2,
/// variance 1/4), so they are defined from the first round on.
class HistoryStats {
 public:
  void update(double x) noexcept;

  std::size_t count() const noexcept { return n_; }
  double sum() const noexcept { return sum_; }
  /// (1/2 + sum x_i) / (n + 1).
  double mean() const noexcept;
  /// (1/4 + sum (x_i - mean_{i-1})^2) / (n + 1).
  double variance() const noexcept;
  /// sum (x_i - mean_{i-1})^2, the predictable squared-residual sum.
  double residual_ss() const noexcept { return rss_; }

 private:
  std::size_t n_ = 0;
  double sum_ = 0.0;
  double rss_ = 0.0;
};

/// Finite mixing distribution over lambda.
struct LambdaGrid {
  std::vector<double> points;
  std::vector<double> weights;

  /// Throws ParameterError if empty, misaligned or weights not convex.
  void validate() const;
};

/// n log-spaced magnitudes from hi / 1024 to hi, uniform weights. Negated for
/// Side::lower.
LambdaGrid default_lambda_grid(double hi, Side side = Side::upper, std::size_t n = 32);

struct BetPolicy {
  enum class Kind { fixed, grid_mixture, plugin_empirical };

  Kind kind = Kind::plugin_empirical;
  double lambda = 0.0;     // fixed
  LambdaGrid grid;         // grid_mixture
  double c = 0.5;          // truncation constant in (0,1)
  double alpha_ref = 0.05; // plug-in tuning level
  double variance_floor = 1e-4;

  static BetPolicy fixed(double lambda, double c = 0.5);
  static BetPolicy plugin(double c = 0.5, double alpha_ref = 0.05);
  static BetPolicy mixture(LambdaGrid grid, double c = 0.5);

  void validate() const;
};

/// Constant lambda clamped into the legal range.
double next_bet_fixed(const BetPolicy& policy, const LegalRange& range);

/// Plug-in lambda for round t = stats.count() + 1. Round one uses
/// sqrt(2 log(2/alpha_ref)); later rounds use
/// sqrt(2 log(2/alpha_ref) / (var * t * log(t+1))) with var the floored
/// history variance. The magnitude is signed by side and clamped.
double next_bet_plugin(const BetPolicy& policy, const HistoryStats& stats, const LegalRange& range,
                       Side side = Side::upper);

/// Unclamped plug-in magnitude, exposed for formula checks.
double plugin_magnitude(const HistoryStats& stats, double alpha_ref, double variance_floor);

/// Wealth-weighted mean of the grid lambdas. For factors linear in lambda
/// (1 + lambda (x - mu)) a mixture of fixed-lambda processes is exactly the
/// single process betting this lambda.
double next_bet_mixture(const LambdaGrid& grid, std::span<const double> per_lambda_log_wealths);

/// log sum_k w_k exp(L_k) with max-shift stabilisation.
double mixture_log_wealth(const LambdaGrid& grid, std::span<const double> per_lambda_log_wealths);

/// log sum_k exp(log_terms_k), -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> log_terms);

/// Streaming one-sided bettor for bounded data against a candidate mean mu.
/// All policies are predictable: next_lambda() reads only past observations.
/// A fixed lambda is used by magnitude, with the sign set by the side.
class BoundedBettor {
 public:
  BoundedBettor(BetPolicy policy, double mu, Side side);

  double next_lambda() const;
  /// Log of the round factor for x at the current lambda, then ingests x.
  double observe(double x);

  double mu() const noexcept { return mu_; }
  Side side() const noexcept { return side_; }
  const HistoryStats& history() const noexcept { return stats_; }

 private:
  BetPolicy policy_;
  double mu_;
  Side side_;
  LegalRange range_;
  HistoryStats stats_;
  std::vector<double> grid_log_wealth_;
};

}  // namespace savi
