#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "savi/betting.hpp"
#include "savi/eprocess.hpp"

namespace savi {

enum class CsMethod { subgaussian, asymptotic, emp_bernstein, eb_mixture, catoni, betting, eposterior, twobytwo_difference };

std::string method_name(CsMethod m);
CsMethod parse_cs_method(const std::string& name);  // throws ConfigError

/// Interval for a functional at one time. Empty bands carry NaN endpoints and
/// empty = true.
struct ConfidenceBand {
  std::size_t time = 0;
  double lower = 0.0;
  double upper = 0.0;
  double alpha = 0.05;
  CsMethod method = CsMethod::subgaussian;
  /// False when the band is the hull of a grid rejection set that is not
  /// known to be an interval.
  bool interval_certified = true;
  /// False when the accepted grid points have gaps inside the reported hull.
  bool contiguous = true;
  bool empty = false;

  bool contains(double x) const noexcept { return !empty && lower <= x && x <= upper; }
  double width() const noexcept { return upper - lower; }
};

struct MeanGridSpec {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t resolution = 1024;

  void validate() const;
  /// Evenly spaced points lo..hi inclusive.
  std::vector<double> points() const;
};

// ---- sub-Gaussian mixture -------------------------------------------------
//
// rho is dimensionless throughout: the Gaussian mixing law over lambda has
// standard deviation rho / sigma, which makes the band
//   Y/t +- sigma sqrt(((t rho^2 + 1) / (t^2 rho^2)) log((t rho^2 + 1) / alpha^2)).

ConfidenceBand subgaussian_cs(std::size_t t, double sum, double sigma, double rho, double alpha);

/// log of the Gaussian-mixture wealth at candidate mean mu.
double subgaussian_mixture_log_wealth(std::size_t t, double sum, double mu, double sigma, double rho);

/// rho that minimises the band width at time t0 for level alpha.
double default_rho(double alpha, double t0 = 100.0);

/// Asymptotic band: the sub-Gaussian formula with sigma replaced by the
/// sample standard deviation (floored at 1e-6). Throws InsufficientData for
/// t < 2.
ConfidenceBand asymptotic_cs(std::size_t t, double sum, double sigma_hat, double rho, double alpha);

/// -log(1 - lambda) - lambda, lambda in [0, 1).
double psi_exp(double lambda);

/// Catoni influence: log(1 + x + x^2/2) for x >= 0, -log(1 - x + x^2/2) below.
double catoni_phi(double x);

// ---- streaming interface --------------------------------------------------

class ConfidenceSequence {
 public:
  virtual ~ConfidenceSequence() = default;
  virtual void observe(double x) = 0;
  virtual ConfidenceBand band() const = 0;
  virtual std::size_t time() const = 0;
  virtual CsMethod method() const = 0;
};

class SubGaussianCS final : public ConfidenceSequence {
 public:
  SubGaussianCS(double sigma, double rho, double alpha);
  void observe(double x) override;
  ConfidenceBand band() const override;
  std::size_t time() const override { return t_; }
  CsMethod method() const override { return CsMethod::subgaussian; }
  double sum() const noexcept { return sum_; }
  /// Log wealth of the mixture at mu; reaches log(1/alpha) iff mu leaves the band.
  double log_wealth(double mu) const;

 private:
  double sigma_, rho_, alpha_;
  std::size_t t_ = 0;
  double sum_ = 0.0;
};

/// Asymptotic CS; before two observations the band is the whole line.
class AsymptoticCS final : public ConfidenceSequence {
 public:
  AsymptoticCS(double rho, double alpha);
  void observe(double x) override;
  ConfidenceBand band() const override;
  std::size_t time() const override { return n_; }
  CsMethod method() const override { return CsMethod::asymptotic; }

 private:
  double rho_, alpha_;
  std::size_t n_ = 0;
  double mean_ = 0.0, m2_ = 0.0, sum_ = 0.0;
};

/// Empirical-Bernstein CS for data in [0,1], plug-in lambdas in [0, c].
class EmpiricalBernsteinCS final : public ConfidenceSequence {
 public:
  EmpiricalBernsteinCS(double alpha, BetPolicy policy = BetPolicy::plugin());
  void observe(double x) override;
  ConfidenceBand band() const override;
  std::size_t time() const override { return stats_.count(); }
  CsMethod method() const override { return CsMethod::emp_bernstein; }

  /// Band before clipping to [0,1]; (-inf, inf) while sum lambda = 0.
  ConfidenceBand raw_band() const;
  double next_lambda() const;
  /// Log of each one-sided supermartingale at mu.
  double log_upper_process(double mu) const;
  double log_lower_process(double mu) const;

 private:
  double alpha_;
  BetPolicy policy_;
  HistoryStats stats_;
  double sum_lambda_ = 0.0, sum_lambda_x_ = 0.0, sum_psi_v_ = 0.0;
};

/// Empirical-Bernstein CS mixing fixed lambdas over a grid; each side's
/// boundary is found by bisection on the mixture wealth, which is monotone in mu.
class EmpiricalBernsteinMixtureCS final : public ConfidenceSequence {
 public:
  EmpiricalBernsteinMixtureCS(double alpha, LambdaGrid grid);
  explicit EmpiricalBernsteinMixtureCS(double alpha);
  void observe(double x) override;
  ConfidenceBand band() const override;
  std::size_t time() const override { return stats_.count(); }
  CsMethod method() const override { return CsMethod::eb_mixture; }
  double log_upper_process(double mu) const;
  double log_lower_process(double mu) const;

 private:
  double alpha_;
  LambdaGrid grid_;
  HistoryStats stats_;
};

/// Lambda schedule for the Catoni process.
struct CatoniLambda {
  /// Plug-in: lambda_i = sqrt(2 log(2/alpha) / (sigma^2 i log(i+1))).
  bool plugin = true;
  double value = 0.5;
};

/// Catoni CS for data with conditional variance at most sigma^2. The two
/// one-sided processes run at alpha/2 over a grid of candidate means; the
/// reported endpoints are the outermost rejected grid points, or +-inf when a
/// grid end is not rejected.
class CatoniCS final : public ConfidenceSequence {
 public:
  CatoniCS(double sigma, double alpha, MeanGridSpec grid, CatoniLambda lambda = {});
  CatoniCS(double sigma, double alpha, std::vector<double> candidates, CatoniLambda lambda = {});
  void observe(double x) override;
  ConfidenceBand band() const override;
  std::size_t time() const override { return t_; }
  CsMethod method() const override { return CsMethod::catoni; }

  const std::vector<double>& candidates() const noexcept { return mu_; }
  bool rejects_candidate(std::size_t i) const;
  double next_lambda() const;

 private:
  double sigma_, alpha_;
  CatoniLambda lambda_;
  std::vector<double> mu_;
  std::vector<double> s_;
  double v_ = 0.0;
  std::size_t t_ = 0;
};

/// Two-sided betting martingale for a bounded mean. The e-process value is
/// (K+ + K-) / 2, where K+ bets mean > mu and K- bets mean < mu.
class BettingMartingale {
 public:
  BettingMartingale(double mu, BetPolicy policy = BetPolicy::plugin());
  void observe(double x);
  double log_upper() const noexcept { return log_upper_; }
  double log_lower() const noexcept { return log_lower_; }
  double log_value() const;
  double mu() const noexcept { return upper_.mu(); }

 private:
  BoundedBettor upper_, lower_;
  double log_upper_ = 0.0, log_lower_ = 0.0;
};

/// Betting CS over a grid of candidate means in [0,1]. Each candidate keeps
/// K+ and K- and is rejected once either reaches 2/alpha. The band is the hull
/// of accepted candidates widened to the neighbouring rejected ones (to 0 or 1
/// at the grid ends), so it is reported with interval_certified = false.
class BettingCS final : public ConfidenceSequence {
 public:
  BettingCS(double alpha, BetPolicy policy = BetPolicy::plugin(), MeanGridSpec grid = {});
  BettingCS(double alpha, BetPolicy policy, std::vector<double> candidates);
  void observe(double x) override;
  ConfidenceBand band() const override;
  std::size_t time() const override { return t_; }
  CsMethod method() const override { return CsMethod::betting; }

  const std::vector<double>& candidates() const noexcept { return mu_; }
  bool rejects_candidate(std::size_t i) const;
  double log_upper(std::size_t i) const { return log_up_[i]; }
  double log_lower(std::size_t i) const { return log_lo_[i]; }

 private:
  void init();

  double alpha_;
  BetPolicy policy_;
  std::vector<double> mu_;
  std::vector<double> log_up_, log_lo_;
  std::vector<BoundedBettor> mixture_bettors_;  // grid_mixture only: up, lo interleaved
  HistoryStats stats_;
  std::size_t t_ = 0;
};

/// Running intersection of another sequence's bands.
class RunningIntersection final : public ConfidenceSequence {
 public:
  explicit RunningIntersection(std::unique_ptr<ConfidenceSequence> inner);
  void observe(double x) override;
  ConfidenceBand band() const override { return current_; }
  std::size_t time() const override { return inner_->time(); }
  CsMethod method() const override { return inner_->method(); }

 private:
  std::unique_ptr<ConfidenceSequence> inner_;
  ConfidenceBand current_;
};

/// Shared construction parameters for make_confidence_sequence.
struct CsConfig {
  CsMethod method = CsMethod::subgaussian;
  double alpha = 0.05;
  double sigma = 1.0;
  std::optional<double> rho;  // default_rho(alpha, t0) when unset
  double t0 = 100.0;
  BetPolicy policy = BetPolicy::plugin();
  std::optional<MeanGridSpec> grid;
  CatoniLambda catoni;
  bool intersect = false;
};

std::unique_ptr<ConfidenceSequence> make_confidence_sequence(const CsConfig& cfg);

}  // namespace savi
