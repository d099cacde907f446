#include "savi/nonparam.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "savi/errors.hpp"

namespace savi {

namespace {

// 1 - exp(-y^2/2) cosh(y) >= 0, accurate near 0.
double rectification_gap(double y) {
  const double a = std::abs(y);
  double u;
  if (a < 0.05) {
    const double y2 = a * a, y4 = y2 * y2;
    u = -y4 / 12.0 + y4 * y2 / 45.0 - 17.0 * y4 * y4 / 2520.0;
  } else {
    u = a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2 - 0.5 * a * a;
  }
  return -std::expm1(std::min(0.0, u));
}

}  // namespace

double log_raw_symmetry_bet(double x, double lambda) {
  const double y = lambda * x;
  return y - 0.5 * y * y;
}

double raw_symmetry_bet(double x, double lambda) { return std::exp(log_raw_symmetry_bet(x, lambda)); }

double rectified_symmetry_bet(double x, double lambda) {
  return raw_symmetry_bet(x, lambda) + rectification_gap(lambda * x);
}

WealthLedger symmetry_step(WealthLedger ledger, double x, const SymmetryBetSpec& spec) {
  if (!std::isfinite(x)) throw DataError("observation is not finite");
  if (!std::isfinite(spec.lambda)) throw ParameterError("lambda must be finite");
  if (!spec.rectified) {
    ledger.step_log(log_raw_symmetry_bet(x, spec.lambda));
    return ledger;
  }
  // log(raw + gap) = log(raw) + log1p(gap / raw): stays exactly at log(raw)
  // when the gap vanishes, so rectified wealth never rounds below raw wealth.
  const double log_raw = log_raw_symmetry_bet(x, spec.lambda);
  const double gap = rectification_gap(spec.lambda * x);
  if (!(gap >= 0.0)) throw InvariantViolation("rectified symmetry bet below raw bet");
  if (log_raw > -700.0)
    ledger.step_log(log_raw + std::log1p(gap * std::exp(-log_raw)));
  else
    ledger.step_log(std::log(gap + std::exp(log_raw)));
  return ledger;
}

SymmetryTest::SymmetryTest(SymmetryBetSpec spec) : SymmetryTest(LambdaGrid{{spec.lambda}, {1.0}}, spec.rectified) {}

SymmetryTest::SymmetryTest(LambdaGrid grid, bool rectified) : grid_(std::move(grid)), rectified_(rectified) {
  grid_.validate();
  ledgers_.resize(grid_.points.size());
}

SymmetryTest SymmetryTest::mixture(bool rectified, std::vector<double> lambdas) {
  LambdaGrid g;
  g.weights.assign(lambdas.size(), lambdas.empty() ? 0.0 : 1.0 / static_cast<double>(lambdas.size()));
  g.points = std::move(lambdas);
  return SymmetryTest(std::move(g), rectified);
}

void SymmetryTest::observe(double x) {
  for (std::size_t k = 0; k < ledgers_.size(); ++k)
    ledgers_[k] = symmetry_step(ledgers_[k], x, {grid_.points[k], rectified_});
  ++t_;
  running_max_ = std::max(running_max_, log_value());
}

double SymmetryTest::log_value() const {
  std::vector<double> logs(ledgers_.size());
  for (std::size_t k = 0; k < logs.size(); ++k) logs[k] = ledgers_[k].log_wealth();
  return mixture_log_wealth(grid_, logs);
}

double BinarySequenceState::log_denominator() const {
  const double t = static_cast<double>(step_count());
  double out = 0.0;
  if (count_ones > 0) out += static_cast<double>(count_ones) * std::log(static_cast<double>(count_ones) / t);
  if (count_zeros > 0) out += static_cast<double>(count_zeros) * std::log(static_cast<double>(count_zeros) / t);
  return out;
}

double markov_predictive(const BinarySequenceState& state, int bit) {
  if (bit != 0 && bit != 1) throw DataError("bit must be 0 or 1");
  if (state.last_bit < 0) return 0.5;
  const auto& row = state.transition_counts[static_cast<std::size_t>(state.last_bit)];
  return (static_cast<double>(row[static_cast<std::size_t>(bit)]) + 1.0) /
         (static_cast<double>(row[0] + row[1]) + 2.0);
}

ExchangeabilityUpdate exchangeability_eprocess_step(BinarySequenceState state, int bit) {
  state.log_numerator += std::log(markov_predictive(state, bit));
  if (state.last_bit >= 0)
    ++state.transition_counts[static_cast<std::size_t>(state.last_bit)][static_cast<std::size_t>(bit)];
  (bit == 1 ? state.count_ones : state.count_zeros) += 1;
  state.last_bit = bit;
  const double value = std::exp(state.log_value());
  return {state, value};
}

}  // namespace savi
