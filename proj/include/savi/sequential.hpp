#pragma once

#include <memory>
#include <string>

#include "savi/betting.hpp"
#include "savi/conf_seq.hpp"
#include "savi/nonparam.hpp"
#include "savi/param.hpp"

namespace savi {

/// Scalar-input e-process with a uniform streaming interface, used by the
/// e-detector and the simulation harness.
class SequentialEProcess {
 public:
  virtual ~SequentialEProcess() = default;
  virtual void observe(double x) = 0;
  virtual double log_value() const = 0;
  /// New process with the same configuration, at its initial state.
  virtual std::unique_ptr<SequentialEProcess> fresh() const = 0;
  virtual std::string name() const = 0;
};

/// Simple likelihood ratio N(mu1, sigma^2) against N(mu0, sigma^2).
class GaussianLikelihoodRatio final : public SequentialEProcess {
 public:
  GaussianLikelihoodRatio(double mu0, double mu1, double sigma = 1.0);
  void observe(double x) override;
  double log_value() const override { return log_value_; }
  std::unique_ptr<SequentialEProcess> fresh() const override;
  std::string name() const override { return "gaussian-lr"; }
  /// log of one round's likelihood ratio.
  double log_lr(double x) const;

 private:
  double mu0_, mu1_, sigma_;
  double log_value_ = 0.0;
};

/// Bets nothing: value 1 forever.
class ConstantProcess final : public SequentialEProcess {
 public:
  void observe(double x) override;
  double log_value() const override { return 0.0; }
  std::unique_ptr<SequentialEProcess> fresh() const override;
  std::string name() const override { return "constant"; }
};

class SymmetryProcess final : public SequentialEProcess {
 public:
  SymmetryProcess(bool rectified, bool mixture, double lambda = 1.0);
  void observe(double x) override { test_.observe(x); }
  double log_value() const override { return test_.log_value(); }
  std::unique_ptr<SequentialEProcess> fresh() const override;
  std::string name() const override { return "symmetry"; }

 private:
  bool rectified_, mixture_;
  double lambda_;
  SymmetryTest test_;
};

/// Two-sided betting martingale for a bounded mean.
class BoundedMeanBetting final : public SequentialEProcess {
 public:
  BoundedMeanBetting(double mu, BetPolicy policy = BetPolicy::plugin());
  void observe(double x) override { m_.observe(x); }
  double log_value() const override { return m_.log_value(); }
  std::unique_ptr<SequentialEProcess> fresh() const override;
  std::string name() const override { return "betting"; }

 private:
  double mu_;
  BetPolicy policy_;
  BettingMartingale m_;
};

class SubGaussianMixtureProcess final : public SequentialEProcess {
 public:
  SubGaussianMixtureProcess(double mu, double sigma, double rho);
  void observe(double x) override;
  double log_value() const override;
  std::unique_ptr<SequentialEProcess> fresh() const override;
  std::string name() const override { return "subgaussian"; }

 private:
  double mu_, sigma_, rho_;
  std::size_t t_ = 0;
  double sum_ = 0.0;
};

class TTestProcess final : public SequentialEProcess {
 public:
  TTestProcess(double delta0, double delta1);
  void observe(double x) override { test_.observe(x); }
  double log_value() const override { return test_.log_wealth(); }
  std::unique_ptr<SequentialEProcess> fresh() const override;
  std::string name() const override { return "ttest"; }
  const TTest& test() const noexcept { return test_; }

 private:
  double delta0_, delta1_;
  TTest test_;
};

/// Observations are bits.
class ExchangeabilityProcess final : public SequentialEProcess {
 public:
  void observe(double x) override;
  double log_value() const override { return state_.log_value(); }
  std::unique_ptr<SequentialEProcess> fresh() const override;
  std::string name() const override { return "exchangeability"; }
  const BinarySequenceState& state() const noexcept { return state_; }

 private:
  BinarySequenceState state_;
};

/// Observations are event groups (1 = treatment, 0 = control).
class LogrankProcess final : public SequentialEProcess {
 public:
  LogrankProcess(int n_treat, int n_ctrl, double beta);
  void observe(double x) override;
  double log_value() const override { return ledger_.log_wealth(); }
  std::unique_ptr<SequentialEProcess> fresh() const override;
  std::string name() const override { return "logrank"; }
  const RiskSetState& risk_set() const noexcept { return state_; }

 private:
  RiskSetState initial_, state_;
  WealthLedger ledger_;
};

}  // namespace savi
