#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "savi/betting.hpp"
#include "savi/eprocess.hpp"

namespace savi {

// ---- symmetry about zero ---------------------------------------------------

struct SymmetryBetSpec {
  double lambda = 1.0;
  /// Use 1 + odd part of (g - 1) instead of g(x) = exp(lambda x - lambda^2 x^2 / 2).
  bool rectified = true;
};

/// exp(lambda x - lambda^2 x^2 / 2).
double raw_symmetry_bet(double x, double lambda);
double log_raw_symmetry_bet(double x, double lambda);

/// 1 + (g(x) - g(-x)) / 2, computed as g(x) + (1 - e^{-y^2/2} cosh y) with
/// y = lambda x so that the result is never below the raw bet in floating point.
double rectified_symmetry_bet(double x, double lambda);

/// Multiplies the ledger by the configured bet. When rectified, also checks
/// rectified >= raw and raises InvariantViolation otherwise.
WealthLedger symmetry_step(WealthLedger ledger, double x, const SymmetryBetSpec& spec);

/// Symmetry e-process: one ledger per lambda, mixed with fixed weights.
class SymmetryTest {
 public:
  explicit SymmetryTest(SymmetryBetSpec spec = {});
  /// Uniform mixture over the given lambdas (default {1/4, 1/2, 1, 2}).
  static SymmetryTest mixture(bool rectified, std::vector<double> lambdas = {0.25, 0.5, 1.0, 2.0});

  void observe(double x);
  double log_value() const;
  /// Running max of log_value over time.
  double running_max_log_value() const noexcept { return running_max_; }
  std::size_t time() const noexcept { return t_; }

 private:
  SymmetryTest(LambdaGrid grid, bool rectified);

  LambdaGrid grid_;
  bool rectified_;
  std::vector<WealthLedger> ledgers_;
  double running_max_ = 0.0;
  std::size_t t_ = 0;
};

// ---- binary exchangeability --------------------------------------------------

/// Counts for the universal-inference e-process against exchangeability.
struct BinarySequenceState {
  std::size_t count_ones = 0;
  std::size_t count_zeros = 0;
  /// transition_counts[a][b] = number of a -> b transitions seen.
  std::array<std::array<std::size_t, 2>, 2> transition_counts{};
  int last_bit = -1;
  /// Log of the sequential Markov predictive likelihood.
  double log_numerator = 0.0;

  std::size_t step_count() const noexcept { return count_ones + count_zeros; }
  /// log of the iid-Bernoulli maximum likelihood of the counts.
  double log_denominator() const;
  double log_value() const { return log_numerator - log_denominator(); }
};

/// Laplace-smoothed first-order Markov probability of the next bit.
double markov_predictive(const BinarySequenceState& state, int bit);

struct ExchangeabilityUpdate {
  BinarySequenceState state;
  double value;
};

/// Throws DataError for bits other than 0 and 1.
ExchangeabilityUpdate exchangeability_eprocess_step(BinarySequenceState state, int bit);

}  // namespace savi
