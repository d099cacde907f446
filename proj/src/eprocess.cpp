#include "savi/eprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "savi/errors.hpp"

namespace savi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLogFlush = std::log(WealthLedger::kFlushBelow);

std::string fmt_kappa(const char* prefix, double kappa) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%g", prefix, kappa);
  return buf;
}

}  // namespace

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
}

bool reaches_threshold(double log_value, double alpha) {
  require_alpha(alpha);
  return log_value >= -std::log(alpha) - kLogThresholdSlack;
}

void WealthLedger::step(UnitBet bet) {
  if (std::isnan(bet.value)) throw InvalidBet("bet is NaN");
  if (bet.value < 0.0) throw InvalidBet("bet is negative");
  step_log(bet.value < kFlushBelow ? -kInf : std::log(bet.value));
}

void WealthLedger::step_log(double log_bet) {
  if (std::isnan(log_bet)) throw InvalidBet("log bet is NaN");
  ++steps_;
  if (bankrupt_) return;
  if (log_bet < kLogFlush) {
    bankrupt_ = true;
    log_wealth_ = -kInf;
    return;
  }
  log_wealth_ += log_bet;
  running_max_ = std::max(running_max_, log_wealth_);
}

double WealthLedger::wealth() const { return std::exp(log_wealth_); }

double WealthLedger::running_max_wealth() const { return std::exp(running_max_); }

WealthLedger ledger_step(WealthLedger ledger, UnitBet bet) {
  ledger.step(bet);
  return ledger;
}

bool ville_test(const WealthLedger& ledger, double alpha) {
  return reaches_threshold(ledger.running_max_log_wealth(), alpha);
}

AnytimeP anytime_p(const WealthLedger& ledger) {
  return {std::min(1.0, std::exp(-ledger.running_max_log_wealth()))};
}

EValue combine_average(std::span<const EValue> evalues, std::span<const double> weights) {
  if (evalues.size() != weights.size()) throw ParameterError("e-values and weights differ in length");
  if (evalues.empty()) throw ParameterError("nothing to combine");
  double wsum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ParameterError("weights must be nonnegative");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-12) throw ParameterError("weights must sum to 1");
  double acc = 0.0;
  for (std::size_t i = 0; i < evalues.size(); ++i) {
    if (!(evalues[i].value >= 0.0)) throw ParameterError("e-values must be nonnegative");
    if (weights[i] > 0.0) acc += weights[i] * evalues[i].value;
  }
  return {acc};
}

EValue combine_product(std::span<const EValue> evalues) {
  double log_acc = 0.0;
  bool has_inf = false;
  for (const EValue& e : evalues) {
    if (!(e.value >= 0.0)) throw ParameterError("e-values must be nonnegative");
    if (e.value == 0.0) return {0.0};
    if (std::isinf(e.value))
      has_inf = true;
    else
      log_acc += std::log(e.value);
  }
  if (has_inf) return {kInf};
  return {std::exp(log_acc)};
}

Calibrator Calibrator::power(double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw ParameterError("calibrator kappa must lie in (0, 1)");
  return {Kind::power, kappa};
}

Calibrator Calibrator::integrated() { return {Kind::integrated, 0.0}; }

double Calibrator::operator()(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("p-value must lie in [0, 1]");
  if (kind_ == Kind::power) {
    if (p == 0.0) return kInf;
    return kappa_ * std::pow(p, kappa_ - 1.0);
  }
  if (p == 0.0) return kInf;
  const double u = -std::log(p);
  if (u < 1e-3) return 0.5 + u / 6.0 + u * u / 24.0 + u * u * u / 120.0;
  return (std::expm1(u) - u) / (u * u);
}

std::string Calibrator::name() const {
  return kind_ == Kind::power ? fmt_kappa("kappa=", kappa_) : "integrated";
}

std::vector<Calibrator> builtin_calibrators() {
  std::vector<Calibrator> out;
  for (int k = 1; k <= 9; ++k) out.push_back(Calibrator::power(k / 10.0));
  out.push_back(Calibrator::integrated());
  return out;
}

EValue calibrate_p_to_e(double p, const Calibrator& calibrator) { return {calibrator(p)}; }

Adjuster Adjuster::sqrt_lookback() { return {Kind::sqrt_lookback, 0.5}; }

Adjuster Adjuster::power(double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw ParameterError("adjuster kappa must lie in (0, 1)");
  return {Kind::power, kappa};
}

double Adjuster::operator()(double running_max) const {
  if (std::isnan(running_max) || running_max < 0.0) throw ParameterError("running max must be nonnegative");
  if (running_max < 1.0) return 0.0;
  if (kind_ == Kind::sqrt_lookback) return std::sqrt(running_max) - 1.0;
  return kappa_ * std::pow(running_max, 1.0 - kappa_);
}

double Adjuster::from_log(double log_running_max) const {
  if (std::isnan(log_running_max)) throw ParameterError("log running max is NaN");
  if (log_running_max < 0.0) return 0.0;
  if (kind_ == Kind::sqrt_lookback) return std::expm1(0.5 * log_running_max);
  return kappa_ * std::exp((1.0 - kappa_) * log_running_max);
}

std::string Adjuster::name() const {
  return kind_ == Kind::sqrt_lookback ? "sqrt" : fmt_kappa("power=", kappa_);
}

std::vector<Adjuster> builtin_adjusters() {
  return {Adjuster::sqrt_lookback(), Adjuster::power(0.25), Adjuster::power(0.5), Adjuster::power(0.75)};
}

EValue adjust_running_max(const WealthLedger& ledger, const Adjuster& adjuster) {
  return {adjuster.from_log(ledger.running_max_log_wealth())};
}

}  // namespace savi
