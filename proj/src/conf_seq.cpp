#include "savi/conf_seq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "savi/errors.hpp"

namespace savi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_unit(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DataError("observation outside [0, 1]");
}

ConfidenceBand whole_line(std::size_t t, double alpha, CsMethod m) {
  return {t, -kInf, kInf, alpha, m};
}

ConfidenceBand empty_band(std::size_t t, double alpha, CsMethod m) {
  ConfidenceBand b{t, kNaN, kNaN, alpha, m};
  b.empty = true;
  return b;
}

std::vector<double> sorted_candidates(std::vector<double> mus) {
  if (mus.empty()) throw ParameterError("candidate list is empty");
  for (double m : mus)
    if (!std::isfinite(m)) throw ParameterError("candidate mean is not finite");
  std::sort(mus.begin(), mus.end());
  return mus;
}

}  // namespace

std::string method_name(CsMethod m) {
  switch (m) {
    case CsMethod::subgaussian: return "subgaussian";
    case CsMethod::asymptotic: return "asymptotic";
    case CsMethod::emp_bernstein: return "eb";
    case CsMethod::eb_mixture: return "eb-mixture";
    case CsMethod::catoni: return "catoni";
    case CsMethod::betting: return "betting";
    case CsMethod::eposterior: return "eposterior";
    case CsMethod::twobytwo_difference: return "2x2-difference";
  }
  return "unknown";
}

CsMethod parse_cs_method(const std::string& name) {
  for (CsMethod m : {CsMethod::subgaussian, CsMethod::asymptotic, CsMethod::emp_bernstein, CsMethod::eb_mixture,
                     CsMethod::catoni, CsMethod::betting, CsMethod::eposterior, CsMethod::twobytwo_difference})
    if (method_name(m) == name) return m;
  throw ConfigError("unknown confidence-sequence method '" + name + "'");
}

void MeanGridSpec::validate() const {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) throw ParameterError("mean grid needs finite lo < hi");
  if (resolution < 2) throw ParameterError("mean grid needs at least 2 points");
}

std::vector<double> MeanGridSpec::points() const {
  validate();
  std::vector<double> p(resolution);
  const double step = (hi - lo) / static_cast<double>(resolution - 1);
  for (std::size_t i = 0; i < resolution; ++i) p[i] = lo + step * static_cast<double>(i);
  p.back() = hi;
  return p;
}

// ---- closed forms -----------------------------------------------------------

ConfidenceBand subgaussian_cs(std::size_t t, double sum, double sigma, double rho, double alpha) {
  require_alpha(alpha);
  if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");
  if (!(rho > 0.0)) throw ParameterError("rho must be positive");
  if (t == 0) return whole_line(0, alpha, CsMethod::subgaussian);
  const double td = static_cast<double>(t);
  const double a = td * rho * rho + 1.0;
  const double half = sigma * std::sqrt(a / (td * td * rho * rho) * (std::log(a) - 2.0 * std::log(alpha)));
  const double center = sum / td;
  return {t, center - half, center + half, alpha, CsMethod::subgaussian};
}

double subgaussian_mixture_log_wealth(std::size_t t, double sum, double mu, double sigma, double rho) {
  if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");
  if (!(rho > 0.0)) throw ParameterError("rho must be positive");
  if (t == 0) return 0.0;
  const double td = static_cast<double>(t);
  const double dev = (sum - td * mu) / sigma;
  const double a = td * rho * rho;
  return rho * rho * dev * dev / (2.0 * (a + 1.0)) - 0.5 * std::log1p(a);
}

double default_rho(double alpha, double t0) {
  require_alpha(alpha);
  if (!(t0 > 0.0)) throw ParameterError("target time must be positive");
  const double log_inv_a2 = -2.0 * std::log(alpha);
  // width^2 at t0 is proportional to g(x) = ((x+1)/x) log((x+1)/alpha^2), x = t0 rho^2
  auto g = [&](double log_x) {
    const double x = std::exp(log_x);
    return (1.0 + 1.0 / x) * (std::log1p(x) + log_inv_a2);
  };
  const auto best = boost::math::tools::brent_find_minima(g, -20.0, 20.0, 52);
  return std::sqrt(std::exp(best.first) / t0);
}

ConfidenceBand asymptotic_cs(std::size_t t, double sum, double sigma_hat, double rho, double alpha) {
  if (t < 2) throw InsufficientData("asymptotic band needs at least 2 observations");
  if (!(sigma_hat >= 0.0)) throw ParameterError("sigma_hat must be nonnegative");
  ConfidenceBand b = subgaussian_cs(t, sum, std::max(sigma_hat, 1e-6), rho, alpha);
  b.method = CsMethod::asymptotic;
  return b;
}

double psi_exp(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw ParameterError("psi needs lambda in [0, 1)");
  return -std::log1p(-lambda) - lambda;
}

double catoni_phi(double x) {
  if (x >= 0.0) return std::log1p(x + 0.5 * x * x);
  return -std::log1p(-x + 0.5 * x * x);
}

// ---- sub-Gaussian / asymptotic ---------------------------------------------

SubGaussianCS::SubGaussianCS(double sigma, double rho, double alpha) : sigma_(sigma), rho_(rho), alpha_(alpha) {
  subgaussian_cs(1, 0.0, sigma, rho, alpha);  // validates
}

void SubGaussianCS::observe(double x) {
  if (!std::isfinite(x)) throw DataError("observation is not finite");
  sum_ += x;
  ++t_;
}

ConfidenceBand SubGaussianCS::band() const { return subgaussian_cs(t_, sum_, sigma_, rho_, alpha_); }

double SubGaussianCS::log_wealth(double mu) const {
  return subgaussian_mixture_log_wealth(t_, sum_, mu, sigma_, rho_);
}

AsymptoticCS::AsymptoticCS(double rho, double alpha) : rho_(rho), alpha_(alpha) {
  subgaussian_cs(1, 0.0, 1.0, rho, alpha);
}

void AsymptoticCS::observe(double x) {
  if (!std::isfinite(x)) throw DataError("observation is not finite");
  ++n_;
  sum_ += x;
  const double d = x - mean_;
  mean_ += d / static_cast<double>(n_);
  m2_ += d * (x - mean_);
}

ConfidenceBand AsymptoticCS::band() const {
  if (n_ < 2) return whole_line(n_, alpha_, CsMethod::asymptotic);
  const double sd = std::sqrt(std::max(0.0, m2_) / static_cast<double>(n_ - 1));
  return asymptotic_cs(n_, sum_, sd, rho_, alpha_);
}

// ---- empirical Bernstein ---------------------------------------------------

EmpiricalBernsteinCS::EmpiricalBernsteinCS(double alpha, BetPolicy policy) : alpha_(alpha), policy_(std::move(policy)) {
  require_alpha(alpha);
  policy_.validate();
  if (policy_.kind == BetPolicy::Kind::grid_mixture)
    throw ParameterError("empirical-Bernstein plug-in band takes a fixed or plug-in policy");
}

double EmpiricalBernsteinCS::next_lambda() const {
  const LegalRange range{0.0, policy_.c};
  if (policy_.kind == BetPolicy::Kind::fixed) return range.clamp(std::abs(policy_.lambda));
  return next_bet_plugin(policy_, stats_, range, Side::upper);
}

void EmpiricalBernsteinCS::observe(double x) {
  require_unit(x);
  const double lambda = next_lambda();
  const double r = x - stats_.mean();
  sum_lambda_ += lambda;
  sum_lambda_x_ += lambda * x;
  sum_psi_v_ += psi_exp(lambda) * r * r;
  stats_.update(x);
}

double EmpiricalBernsteinCS::log_upper_process(double mu) const {
  return sum_lambda_x_ - mu * sum_lambda_ - sum_psi_v_;
}

double EmpiricalBernsteinCS::log_lower_process(double mu) const {
  return mu * sum_lambda_ - sum_lambda_x_ - sum_psi_v_;
}

ConfidenceBand EmpiricalBernsteinCS::raw_band() const {
  const std::size_t t = stats_.count();
  if (!(sum_lambda_ > 0.0)) return whole_line(t, alpha_, CsMethod::emp_bernstein);
  const double center = sum_lambda_x_ / sum_lambda_;
  const double half = (std::log(2.0 / alpha_) + sum_psi_v_) / sum_lambda_;
  return {t, center - half, center + half, alpha_, CsMethod::emp_bernstein};
}

ConfidenceBand EmpiricalBernsteinCS::band() const {
  ConfidenceBand b = raw_band();
  b.lower = std::clamp(b.lower, 0.0, 1.0);
  b.upper = std::clamp(b.upper, 0.0, 1.0);
  return b;
}

EmpiricalBernsteinMixtureCS::EmpiricalBernsteinMixtureCS(double alpha, LambdaGrid grid)
    : alpha_(alpha), grid_(std::move(grid)) {
  require_alpha(alpha);
  grid_.validate();
  for (double l : grid_.points)
    if (!(l >= 0.0 && l < 1.0)) throw ParameterError("empirical-Bernstein lambdas must lie in [0, 1)");
}

EmpiricalBernsteinMixtureCS::EmpiricalBernsteinMixtureCS(double alpha)
    : EmpiricalBernsteinMixtureCS(alpha, default_lambda_grid(BetPolicy{}.c)) {}

void EmpiricalBernsteinMixtureCS::observe(double x) {
  require_unit(x);
  stats_.update(x);
}

double EmpiricalBernsteinMixtureCS::log_upper_process(double mu) const {
  const double dev = stats_.sum() - static_cast<double>(stats_.count()) * mu;
  std::vector<double> logs(grid_.points.size());
  for (std::size_t k = 0; k < logs.size(); ++k)
    logs[k] = grid_.points[k] * dev - psi_exp(grid_.points[k]) * stats_.residual_ss();
  return mixture_log_wealth(grid_, logs);
}

double EmpiricalBernsteinMixtureCS::log_lower_process(double mu) const {
  const double dev = static_cast<double>(stats_.count()) * mu - stats_.sum();
  std::vector<double> logs(grid_.points.size());
  for (std::size_t k = 0; k < logs.size(); ++k)
    logs[k] = grid_.points[k] * dev - psi_exp(grid_.points[k]) * stats_.residual_ss();
  return mixture_log_wealth(grid_, logs);
}

ConfidenceBand EmpiricalBernsteinMixtureCS::band() const {
  const std::size_t t = stats_.count();
  ConfidenceBand b{t, 0.0, 1.0, alpha_, CsMethod::eb_mixture};
  if (t == 0) return b;
  const double thr = std::log(2.0 / alpha_);
  // Rejected sets are [0, l) and (u, 1]; keep the rejected side of each
  // bracket so the reported band can only be wider.
  if (log_upper_process(0.0) >= thr) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
      const double mid = 0.5 * (lo + hi);
      (log_upper_process(mid) >= thr ? lo : hi) = mid;
    }
    b.lower = lo;
  }
  if (log_lower_process(1.0) >= thr) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
      const double mid = 0.5 * (lo + hi);
      (log_lower_process(mid) >= thr ? hi : lo) = mid;
    }
    b.upper = hi;
  }
  return b;
}

// ---- Catoni ----------------------------------------------------------------

CatoniCS::CatoniCS(double sigma, double alpha, MeanGridSpec grid, CatoniLambda lambda)
    : CatoniCS(sigma, alpha, grid.points(), lambda) {}

CatoniCS::CatoniCS(double sigma, double alpha, std::vector<double> candidates, CatoniLambda lambda)
    : sigma_(sigma), alpha_(alpha), lambda_(lambda), mu_(sorted_candidates(std::move(candidates))) {
  require_alpha(alpha);
  if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");
  if (!lambda.plugin && !(lambda.value > 0.0 && std::isfinite(lambda.value)))
    throw ParameterError("Catoni lambda must be positive");
  s_.assign(mu_.size(), 0.0);
}

double CatoniCS::next_lambda() const {
  if (!lambda_.plugin) return lambda_.value;
  const double i = static_cast<double>(t_ + 1);
  return std::sqrt(2.0 * std::log(2.0 / alpha_) / (sigma_ * sigma_ * i * std::log(i + 1.0)));
}

void CatoniCS::observe(double x) {
  if (!std::isfinite(x)) throw DataError("observation is not finite");
  const double lambda = next_lambda();
  for (std::size_t i = 0; i < mu_.size(); ++i) s_[i] += catoni_phi(lambda * (x - mu_[i]));
  v_ += 0.5 * sigma_ * sigma_ * lambda * lambda;
  ++t_;
}

bool CatoniCS::rejects_candidate(std::size_t i) const {
  return reaches_threshold(s_.at(i) - v_, alpha_ / 2.0) || reaches_threshold(-s_[i] - v_, alpha_ / 2.0);
}

ConfidenceBand CatoniCS::band() const {
  for (std::size_t i = 1; i < s_.size(); ++i)
    if (s_[i] > s_[i - 1] + 1e-9 * (1.0 + std::abs(s_[i - 1])))
      throw InvariantViolation("Catoni sum is not monotone in the candidate mean");
  ConfidenceBand b = whole_line(t_, alpha_, CsMethod::catoni);
  // The upper process rejects a prefix of the grid and the lower one a suffix.
  for (std::size_t i = 0; i < mu_.size(); ++i)
    if (reaches_threshold(s_[i] - v_, alpha_ / 2.0)) b.lower = mu_[i];
  for (std::size_t i = mu_.size(); i-- > 0;)
    if (reaches_threshold(-s_[i] - v_, alpha_ / 2.0)) b.upper = mu_[i];
  if (b.lower > b.upper) throw InvariantViolation("Catoni rejection regions overlap");
  return b;
}

// ---- betting ---------------------------------------------------------------

BettingMartingale::BettingMartingale(double mu, BetPolicy policy)
    : upper_(policy, mu, Side::upper), lower_(std::move(policy), mu, Side::lower) {}

void BettingMartingale::observe(double x) {
  require_unit(x);
  log_upper_ += upper_.observe(x);
  log_lower_ += lower_.observe(x);
}

double BettingMartingale::log_value() const {
  const double both[2] = {log_upper_, log_lower_};
  return log_sum_exp(both) - std::log(2.0);
}

BettingCS::BettingCS(double alpha, BetPolicy policy, MeanGridSpec grid)
    : BettingCS(alpha, std::move(policy), grid.points()) {}

BettingCS::BettingCS(double alpha, BetPolicy policy, std::vector<double> candidates)
    : alpha_(alpha), policy_(std::move(policy)), mu_(sorted_candidates(std::move(candidates))) {
  require_alpha(alpha);
  policy_.validate();
  for (double m : mu_)
    if (!(m >= 0.0 && m <= 1.0)) throw ParameterError("betting candidates must lie in [0, 1]");
  init();
}

void BettingCS::init() {
  log_up_.assign(mu_.size(), 0.0);
  log_lo_.assign(mu_.size(), 0.0);
  if (policy_.kind == BetPolicy::Kind::grid_mixture) {
    mixture_bettors_.reserve(2 * mu_.size());
    for (double m : mu_) {
      mixture_bettors_.emplace_back(policy_, m, Side::upper);
      mixture_bettors_.emplace_back(policy_, m, Side::lower);
    }
  }
}

void BettingCS::observe(double x) {
  require_unit(x);
  if (policy_.kind == BetPolicy::Kind::grid_mixture) {
    for (std::size_t i = 0; i < mu_.size(); ++i) {
      log_up_[i] += mixture_bettors_[2 * i].observe(x);
      log_lo_[i] += mixture_bettors_[2 * i + 1].observe(x);
    }
  } else {
    const double mag = policy_.kind == BetPolicy::Kind::fixed
                           ? std::abs(policy_.lambda)
                           : plugin_magnitude(stats_, policy_.alpha_ref, policy_.variance_floor);
    const double c = policy_.c;
    for (std::size_t i = 0; i < mu_.size(); ++i) {
      const double m = mu_[i];
      const double up = m > 0.0 ? std::min(mag, c / m) : mag;
      const double lo = m < 1.0 ? std::min(mag, c / (1.0 - m)) : mag;
      log_up_[i] += std::log1p(up * (x - m));
      log_lo_[i] += std::log1p(-lo * (x - m));
    }
  }
  stats_.update(x);
  ++t_;
}

bool BettingCS::rejects_candidate(std::size_t i) const {
  return reaches_threshold(log_up_.at(i), alpha_ / 2.0) || reaches_threshold(log_lo_[i], alpha_ / 2.0);
}

ConfidenceBand BettingCS::band() const {
  std::size_t first = mu_.size(), last = 0, accepted = 0;
  for (std::size_t i = 0; i < mu_.size(); ++i) {
    if (rejects_candidate(i)) continue;
    first = std::min(first, i);
    last = i;
    ++accepted;
  }
  if (accepted == 0) {
    ConfidenceBand b = empty_band(t_, alpha_, CsMethod::betting);
    b.interval_certified = false;
    return b;
  }
  ConfidenceBand b{t_, first > 0 ? mu_[first - 1] : 0.0, last + 1 < mu_.size() ? mu_[last + 1] : 1.0, alpha_,
                   CsMethod::betting};
  b.interval_certified = false;
  b.contiguous = accepted == last - first + 1;
  return b;
}

// ---- running intersection / factory ----------------------------------------

RunningIntersection::RunningIntersection(std::unique_ptr<ConfidenceSequence> inner)
    : inner_(std::move(inner)), current_(inner_->band()) {}

void RunningIntersection::observe(double x) {
  inner_->observe(x);
  const ConfidenceBand b = inner_->band();
  const bool was_empty = current_.empty;
  const double lo = std::max(current_.lower, b.lower);
  const double hi = std::min(current_.upper, b.upper);
  const bool certified = current_.interval_certified && b.interval_certified;
  const bool contiguous = current_.contiguous && b.contiguous;
  current_ = b;
  current_.interval_certified = certified;
  current_.contiguous = contiguous;
  if (was_empty || b.empty || lo > hi) {
    current_.lower = current_.upper = kNaN;
    current_.empty = true;
  } else {
    current_.lower = lo;
    current_.upper = hi;
  }
}

std::unique_ptr<ConfidenceSequence> make_confidence_sequence(const CsConfig& cfg) {
  require_alpha(cfg.alpha);
  const double rho = cfg.rho ? *cfg.rho : default_rho(cfg.alpha, cfg.t0);
  std::unique_ptr<ConfidenceSequence> cs;
  switch (cfg.method) {
    case CsMethod::subgaussian: cs = std::make_unique<SubGaussianCS>(cfg.sigma, rho, cfg.alpha); break;
    case CsMethod::asymptotic: cs = std::make_unique<AsymptoticCS>(rho, cfg.alpha); break;
    case CsMethod::emp_bernstein: cs = std::make_unique<EmpiricalBernsteinCS>(cfg.alpha, cfg.policy); break;
    case CsMethod::eb_mixture:
      cs = cfg.policy.kind == BetPolicy::Kind::grid_mixture && !cfg.policy.grid.points.empty()
               ? std::make_unique<EmpiricalBernsteinMixtureCS>(cfg.alpha, cfg.policy.grid)
               : std::make_unique<EmpiricalBernsteinMixtureCS>(cfg.alpha);
      break;
    case CsMethod::catoni:
      if (!cfg.grid) throw ConfigError("catoni needs a mean grid (lo:hi:n)");
      cs = std::make_unique<CatoniCS>(cfg.sigma, cfg.alpha, *cfg.grid, cfg.catoni);
      break;
    case CsMethod::betting:
      cs = std::make_unique<BettingCS>(cfg.alpha, cfg.policy, cfg.grid.value_or(MeanGridSpec{}));
      break;
    default: throw ConfigError("method '" + method_name(cfg.method) + "' is not a streaming mean CS");
  }
  if (cfg.intersect) cs = std::make_unique<RunningIntersection>(std::move(cs));
  return cs;
}

}  // namespace savi
