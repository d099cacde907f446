#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace savi {

/// Multiplicative wealth factor for one betting round. Builders certify that
/// its conditional expectation under the null is at most one.
struct UnitBet {
  double value = 1.0;
};

/// Nonnegative statistic with null expectation at most one; +inf is allowed.
struct EValue {
  double value = 1.0;
};

/// Anytime-valid p-value in (0, 1].
struct AnytimeP {
  double value = 1.0;
};

/// Absolute slack, in natural-log units, used when comparing a log-wealth to
/// log(1/alpha). Covers the rounding of log(1/alpha) versus log of a wealth
/// that is mathematically equal to 1/alpha.
inline constexpr double kLogThresholdSlack = 1e-12;

/// True iff exp(log_value) >= 1/alpha, up to kLogThresholdSlack.
bool reaches_threshold(double log_value, double alpha);

/// Throws ParameterError unless 0 < alpha < 1.
void require_alpha(double alpha);

/// Running log-wealth of one betting process and its running maximum.
///
/// Starts at wealth 1. Zero is absorbing: once a bet of zero is recorded the
/// ledger is bankrupt and its log-wealth is -inf forever. Single round factors
/// below kFlushBelow are treated as exact zero.
class WealthLedger {
 public:
  static constexpr double kFlushBelow = 1e-300;

  /// Records one round. Throws InvalidBet for negative or NaN bets.
  void step(UnitBet bet);

  /// Records one round given log(bet). NaN throws InvalidBet; -inf and values
  /// below log(kFlushBelow) bankrupt the ledger.
  void step_log(double log_bet);

  double log_wealth() const noexcept { return log_wealth_; }
  double running_max_log_wealth() const noexcept { return running_max_; }
  double wealth() const;
  double running_max_wealth() const;
  std::size_t step_count() const noexcept { return steps_; }
  bool bankrupt() const noexcept { return bankrupt_; }

 private:
  double log_wealth_ = 0.0;
  double running_max_ = 0.0;
  std::size_t steps_ = 0;
  bool bankrupt_ = false;
};

/// Functional form of WealthLedger::step.
WealthLedger ledger_step(WealthLedger ledger, UnitBet bet);

/// Sequential test: rejects once the running maximum wealth reaches 1/alpha.
bool ville_test(const WealthLedger& ledger, double alpha);

/// min(1, 1 / max_{s<=t} M_s).
AnytimeP anytime_p(const WealthLedger& ledger);

/// Convex combination of e-values. The weights must be fixed before the
/// e-values are seen; that is the caller's responsibility. Valid under any
/// dependence between the inputs.
EValue combine_average(std::span<const EValue> evalues, std::span<const double> weights);

/// Product of e-values, accumulated in log space. Valid when the inputs are
/// independent or each is an e-value conditional on its predecessors.
EValue combine_product(std::span<const EValue> evalues);

/// p-to-e calibrator: a nonincreasing f on [0,1] with unit integral.
class Calibrator {
 public:
  enum class Kind { power, integrated };

  /// f(p) = kappa * p^(kappa - 1), kappa in (0, 1).
  static Calibrator power(double kappa);
  /// f(p) = integral over kappa in (0,1) of kappa * p^(kappa - 1)
  ///      = (1 - p + p log p) / (p log^2 p).
  static Calibrator integrated();

  double operator()(double p) const;

  Kind kind() const noexcept { return kind_; }
  double kappa() const noexcept { return kappa_; }
  std::string name() const;

 private:
  Calibrator(Kind kind, double kappa) : kind_(kind), kappa_(kappa) {}
  Kind kind_;
  double kappa_;
};

/// kappa in {0.1, ..., 0.9} followed by the integrated calibrator.
std::vector<Calibrator> builtin_calibrators();

/// Throws ParameterError unless p is in [0, 1].
EValue calibrate_p_to_e(double p, const Calibrator& calibrator);

/// Lookback adjuster: turns sup_{s<=t} M_s back into an e-value. Every
/// built-in satisfies integral_1^inf a(y) / y^2 dy <= 1.
class Adjuster {
 public:
  enum class Kind { sqrt_lookback, power };

  /// a(y) = sqrt(y) - 1 for y >= 1, else 0.
  static Adjuster sqrt_lookback();
  /// a(y) = kappa * y^(1 - kappa) for y >= 1, else 0.
  static Adjuster power(double kappa);

  double operator()(double running_max) const;
  double from_log(double log_running_max) const;

  Kind kind() const noexcept { return kind_; }
  double kappa() const noexcept { return kappa_; }
  std::string name() const;

 private:
  Adjuster(Kind kind, double kappa) : kind_(kind), kappa_(kappa) {}
  Kind kind_;
  double kappa_;
};

std::vector<Adjuster> builtin_adjusters();

EValue adjust_running_max(const WealthLedger& ledger, const Adjuster& adjuster);

}  // namespace savi
