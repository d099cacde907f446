#include "savi/sequential.hpp"

#include <cmath>

#include "savi/errors.hpp"

namespace savi {

GaussianLikelihoodRatio::GaussianLikelihoodRatio(double mu0, double mu1, double sigma)
    : mu0_(mu0), mu1_(mu1), sigma_(sigma) {
  if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");
  if (!std::isfinite(mu0) || !std::isfinite(mu1)) throw ParameterError("means must be finite");
}

double GaussianLikelihoodRatio::log_lr(double x) const {
  return (mu1_ - mu0_) * (x - 0.5 * (mu0_ + mu1_)) / (sigma_ * sigma_);
}

void GaussianLikelihoodRatio::observe(double x) {
  if (!std::isfinite(x)) throw DataError("observation is not finite");
  log_value_ += log_lr(x);
}

std::unique_ptr<SequentialEProcess> GaussianLikelihoodRatio::fresh() const {
  return std::make_unique<GaussianLikelihoodRatio>(mu0_, mu1_, sigma_);
}

void ConstantProcess::observe(double x) {
  if (std::isnan(x)) throw DataError("observation is NaN");
}

std::unique_ptr<SequentialEProcess> ConstantProcess::fresh() const { return std::make_unique<ConstantProcess>(); }

SymmetryProcess::SymmetryProcess(bool rectified, bool mixture, double lambda)
    : rectified_(rectified),
      mixture_(mixture),
      lambda_(lambda),
      test_(mixture ? SymmetryTest::mixture(rectified) : SymmetryTest({lambda, rectified})) {}

std::unique_ptr<SequentialEProcess> SymmetryProcess::fresh() const {
  return std::make_unique<SymmetryProcess>(rectified_, mixture_, lambda_);
}

BoundedMeanBetting::BoundedMeanBetting(double mu, BetPolicy policy) : mu_(mu), policy_(policy), m_(mu, policy) {}

std::unique_ptr<SequentialEProcess> BoundedMeanBetting::fresh() const {
  return std::make_unique<BoundedMeanBetting>(mu_, policy_);
}

SubGaussianMixtureProcess::SubGaussianMixtureProcess(double mu, double sigma, double rho)
    : mu_(mu), sigma_(sigma), rho_(rho) {
  subgaussian_mixture_log_wealth(0, 0.0, mu, sigma, rho);
}

void SubGaussianMixtureProcess::observe(double x) {
  if (!std::isfinite(x)) throw DataError("observation is not finite");
  sum_ += x;
  ++t_;
}

double SubGaussianMixtureProcess::log_value() const {
  return subgaussian_mixture_log_wealth(t_, sum_, mu_, sigma_, rho_);
}

std::unique_ptr<SequentialEProcess> SubGaussianMixtureProcess::fresh() const {
  return std::make_unique<SubGaussianMixtureProcess>(mu_, sigma_, rho_);
}

TTestProcess::TTestProcess(double delta0, double delta1) : delta0_(delta0), delta1_(delta1), test_(delta0, delta1) {}

std::unique_ptr<SequentialEProcess> TTestProcess::fresh() const {
  return std::make_unique<TTestProcess>(delta0_, delta1_);
}

void ExchangeabilityProcess::observe(double x) {
  if (x != 0.0 && x != 1.0) throw DataError("bit must be 0 or 1");
  state_ = exchangeability_eprocess_step(state_, static_cast<int>(x)).state;
}

std::unique_ptr<SequentialEProcess> ExchangeabilityProcess::fresh() const {
  return std::make_unique<ExchangeabilityProcess>();
}

LogrankProcess::LogrankProcess(int n_treat, int n_ctrl, double beta)
    : initial_{n_treat, n_ctrl, beta}, state_(initial_) {
  if (n_treat < 0 || n_ctrl < 0 || n_treat + n_ctrl == 0) throw ParameterError("risk set must be nonempty");
  if (!std::isfinite(beta)) throw ParameterError("beta must be finite");
}

void LogrankProcess::observe(double x) {
  if (x != 0.0 && x != 1.0) throw DataError("event group must be 0 or 1");
  const LogrankUpdate u = logrank_step(state_, static_cast<int>(x));
  state_ = u.state;
  ledger_.step(u.bet);
}

std::unique_ptr<SequentialEProcess> LogrankProcess::fresh() const {
  return std::make_unique<LogrankProcess>(initial_.n_treat, initial_.n_ctrl, initial_.beta);
}

}  // namespace savi
