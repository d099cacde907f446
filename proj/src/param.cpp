#include "savi/param.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include <boost/math/tools/minima.hpp>

#include "savi/betting.hpp"
#include "savi/errors.hpp"
#include "savi/sim/rng.hpp"
#include "savi/sim/samplers.hpp"

namespace savi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

// k log p with 0 log 0 = 0.
double xlogy(double k, double p) {
  if (k == 0.0) return 0.0;
  return p > 0.0 ? k * std::log(p) : -kInf;
}

// log J_1(z) = log(sqrt(2 pi) e^{z^2/2} Phi(z)).
double log_j1(double z) {
  if (z >= 0.0) return 0.5 * z * z + kLogSqrt2Pi + std::log(0.5 * std::erfc(-z / std::numbers::sqrt2));
  const double a = -z;
  if (a < 5.0) return 0.5 * a * a + kLogSqrt2Pi + std::log(0.5 * std::erfc(a / std::numbers::sqrt2));
  // Mills ratio continued fraction: J_1(-a) = 1 / (a + 1/(a + 2/(a + ...))).
  double f = a;
  for (int k = 80; k >= 1; --k) f = a + k / f;
  return -std::log(f);
}

void require_open_unit(double theta, const char* what) {
  if (!(theta > 0.0 && theta < 1.0)) throw ParameterError(std::string(what) + " must lie in (0, 1)");
}

void require_convex(std::span<const double> w, std::size_t n, const char* what) {
  if (n == 0) throw ParameterError(std::string(what) + " has no support points");
  if (w.size() != n) throw ParameterError(std::string(what) + " points and weights differ in length");
  double s = 0.0;
  for (double x : w) {
    if (!(x >= 0.0)) throw ParameterError(std::string(what) + " weights must be nonnegative");
    s += x;
  }
  if (std::abs(s - 1.0) > 1e-9) throw ParameterError(std::string(what) + " weights must sum to 1");
}

ConfidenceBand hull_band(std::span<const double> thetas, const std::vector<bool>& accepted, double alpha,
                         CsMethod method) {
  ConfidenceBand b{0, kNaN, kNaN, alpha, method};
  b.interval_certified = false;
  std::size_t first = thetas.size(), last = 0, count = 0;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    if (!accepted[i]) continue;
    first = std::min(first, i);
    last = i;
    ++count;
  }
  if (count == 0) {
    b.empty = true;
    return b;
  }
  b.lower = thetas[first];
  b.upper = thetas[last];
  b.contiguous = count == last - first + 1;
  return b;
}

void require_ascending(std::span<const double> xs) {
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) throw ParameterError("grid must be strictly increasing");
}

}  // namespace

// ---- t-test ------------------------------------------------------------------

double log_haar_integral(std::size_t n, double z) {
  if (n == 0) throw ParameterError("Haar integral needs n >= 1");
  if (!std::isfinite(z)) throw ParameterError("Haar integral argument must be finite");
  const double lj1 = log_j1(z);
  if (n == 1) return lj1;
  const double a = -z;
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  // The result is a sum of n logs of size log(sqrt(n)), and callers subtract
  // two such sums; extended precision keeps the difference clean.
  const long double zl = z;
  long double out = lj1;
  if (z >= 0.0 || a * sqrt_n <= 3.0) {
    // Forward ratio recurrence q_{m+1} = z + m / q_m; error growth is at most
    // exp(2 a sqrt(n)) when z < 0.
    long double q = std::exp(-static_cast<long double>(lj1)) + zl;
    for (std::size_t m = 1; m < n; ++m) {
      out += std::log(q);
      q = zl + static_cast<long double>(m) / q;
    }
    return static_cast<double>(out);
  }
  // Backward: rho_m = m / (rho_{m+1} - z) damps start errors by about
  // exp(-2 a (sqrt(M) - sqrt(n))).
  const double root_m = sqrt_n + 20.0 / a;
  const auto big_m = static_cast<std::size_t>(std::ceil(root_m * root_m)) + 2;
  long double rho = 0.5L * (zl + std::sqrt(zl * zl + 4.0L * static_cast<long double>(big_m)));
  for (std::size_t m = big_m - 1; m >= 1; --m) {
    rho = static_cast<long double>(m) / (rho - zl);
    if (m < n) out += std::log(rho);
  }
  return static_cast<double>(out);
}

double log_haar_marginal_ratio(std::size_t n, double sum, double sum_sq, double delta0, double delta1) {
  if (n == 0) return 0.0;
  if (!(sum_sq > 0.0)) throw ParameterError("sum of squares must be positive");
  if (delta0 == delta1) return 0.0;
  const double r = sum / std::sqrt(sum_sq);
  const double nd = static_cast<double>(n);
  return -0.5 * nd * (delta1 * delta1 - delta0 * delta0) + log_haar_integral(n, delta1 * r) -
         log_haar_integral(n, delta0 * r);
}

TTest::TTest(double delta0, double delta1) : delta0_(delta0), delta1_(delta1) {
  if (!std::isfinite(delta0) || !std::isfinite(delta1)) throw ParameterError("effect sizes must be finite");
}

void TTest::observe(double x) {
  if (!std::isfinite(x)) throw DataError("observation is not finite");
  if (n_ == 0 && x == 0.0) {
    ++skipped_;
    return;
  }
  ++n_;
  sum_ += x;
  sum_sq_ += static_cast<long double>(x) * x;
  const double now = log_haar_marginal_ratio(n_, static_cast<double>(sum_), static_cast<double>(sum_sq_), delta0_, delta1_);
  // Difference against the ledger itself so rounding does not accumulate.
  ledger_.step_log(now - ledger_.log_wealth());
}

// ---- 2x2 ---------------------------------------------------------------------

void TwoByTwoBlock::validate() const {
  if (n_a < 1 || n_b < 1) throw DataError("block group sizes must be positive");
  if (outcomes.size() != static_cast<std::size_t>(n_a + n_b))
    throw DataError("block has " + std::to_string(outcomes.size()) + " outcomes, expected " +
                    std::to_string(n_a + n_b));
  for (int y : outcomes)
    if (y != 0 && y != 1) throw DataError("block outcomes must be 0 or 1");
}

int TwoByTwoBlock::ones_a() const {
  int s = 0;
  for (int i = 0; i < n_a; ++i) s += outcomes.at(static_cast<std::size_t>(i));
  return s;
}

int TwoByTwoBlock::ones_b() const {
  int s = 0;
  for (int i = n_a; i < n_a + n_b; ++i) s += outcomes.at(static_cast<std::size_t>(i));
  return s;
}

double log_twobytwo_block_evalue(int n_a, int n_b, int ones_a, int ones_b, double theta_a, double theta_b) {
  require_open_unit(theta_a, "theta_a");
  require_open_unit(theta_b, "theta_b");
  if (n_a < 1 || n_b < 1 || ones_a < 0 || ones_a > n_a || ones_b < 0 || ones_b > n_b)
    throw DataError("inconsistent block counts");
  const double wa = static_cast<double>(n_a) / (n_a + n_b);
  const double wb = 1.0 - wa;
  const double q1 = wa * theta_a + wb * theta_b;
  const double q0 = wa * (1.0 - theta_a) + wb * (1.0 - theta_b);
  const double num = ones_a * std::log(theta_a) + (n_a - ones_a) * std::log1p(-theta_a) +
                     ones_b * std::log(theta_b) + (n_b - ones_b) * std::log1p(-theta_b);
  const double den = (ones_a + ones_b) * std::log(q1) + (n_a + n_b - ones_a - ones_b) * std::log(q0);
  return num - den;
}

EValue twobytwo_block_evalue(const TwoByTwoBlock& block, double theta_a, double theta_b) {
  block.validate();
  return {std::exp(
      log_twobytwo_block_evalue(block.n_a, block.n_b, block.ones_a(), block.ones_b(), theta_a, theta_b))};
}

void DiscretePrior::validate() const {
  require_convex(weights, points.size(), "prior");
  for (double p : points)
    if (!std::isfinite(p)) throw ParameterError("prior support point is not finite");
}

void PairPrior::validate() const {
  require_convex(weights, points.size(), "pair prior");
  for (const auto& [a, b] : points) {
    require_open_unit(a, "theta_a");
    require_open_unit(b, "theta_b");
  }
}

PairPrior uniform_pair_prior(std::size_t m) {
  if (m == 0) throw ParameterError("grid size must be positive");
  PairPrior p;
  const double w = 1.0 / static_cast<double>(m * m);
  for (std::size_t i = 1; i <= m; ++i)
    for (std::size_t j = 1; j <= m; ++j) {
      p.points.emplace_back(static_cast<double>(i) / (m + 1), static_cast<double>(j) / (m + 1));
      p.weights.push_back(w);
    }
  return p;
}

PairPrior beta_pair_prior(double a, double b, std::size_t m) {
  if (!(a > 0.0 && b > 0.0)) throw ParameterError("beta hyperparameters must be positive");
  if (m == 0) throw ParameterError("grid size must be positive");
  std::vector<double> theta(m), w(m);
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    theta[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(m);
    w[i] = std::exp((a - 1.0) * std::log(theta[i]) + (b - 1.0) * std::log1p(-theta[i]));
    s += w[i];
  }
  PairPrior p;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      p.points.emplace_back(theta[i], theta[j]);
      p.weights.push_back(w[i] / s * w[j] / s);
    }
  return p;
}

TwoByTwoMixture::TwoByTwoMixture(PairPrior prior, int n_a, int n_b) : prior_(std::move(prior)), n_a_(n_a), n_b_(n_b) {
  prior_.validate();
  if (n_a < 1 || n_b < 1) throw ParameterError("group sizes must be positive");
  const std::size_t cells = static_cast<std::size_t>((n_a + 1) * (n_b + 1));
  table_.resize(prior_.points.size() * cells);
  for (std::size_t k = 0; k < prior_.points.size(); ++k)
    for (int oa = 0; oa <= n_a; ++oa)
      for (int ob = 0; ob <= n_b; ++ob)
        table_[k * cells + static_cast<std::size_t>(oa * (n_b + 1) + ob)] =
            log_twobytwo_block_evalue(n_a, n_b, oa, ob, prior_.points[k].first, prior_.points[k].second);
  log_w_.assign(prior_.points.size(), 0.0);
}

double TwoByTwoMixture::log_s(std::size_t k, int ones_a, int ones_b) const {
  const std::size_t cells = static_cast<std::size_t>((n_a_ + 1) * (n_b_ + 1));
  return table_.at(k * cells + static_cast<std::size_t>(ones_a * (n_b_ + 1) + ones_b));
}

void TwoByTwoMixture::observe(const TwoByTwoBlock& block) {
  block.validate();
  if (block.n_a != n_a_ || block.n_b != n_b_) throw DataError("block sizes differ from the declared design");
  observe_counts(block.ones_a(), block.ones_b());
}

void TwoByTwoMixture::observe_counts(int ones_a, int ones_b) {
  if (ones_a < 0 || ones_a > n_a_ || ones_b < 0 || ones_b > n_b_) throw DataError("inconsistent block counts");
  for (std::size_t k = 0; k < log_w_.size(); ++k) log_w_[k] += log_s(k, ones_a, ones_b);
  ++blocks_;
}

double TwoByTwoMixture::log_value() const {
  LambdaGrid g{std::vector<double>(log_w_.size(), 0.0), prior_.weights};
  return mixture_log_wealth(g, log_w_);
}

std::vector<std::pair<double, double>> regrow_alternatives(double delta, std::size_t n) {
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
  if (n == 0) throw ParameterError("need at least one alternative");
  const double margin = 0.05;
  double lo = 0.5 * delta + margin, hi = 1.0 - 0.5 * delta - margin;
  if (lo > hi || n == 1) lo = hi = 0.5;
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    out.emplace_back(c - 0.5 * delta, c + 0.5 * delta);
  }
  return out;
}

std::vector<RegrowCandidate> beta_prior_candidates(std::span<const double> a_values, std::span<const double> b_values,
                                                   std::size_t m) {
  std::vector<RegrowCandidate> out;
  for (double a : a_values)
    for (double b : b_values) {
      char label[64];
      std::snprintf(label, sizeof label, "beta(%g,%g)", a, b);
      out.push_back({label, beta_pair_prior(a, b, m)});
    }
  return out;
}

RegrowResult regrow_beta_prior_search(std::span<const RegrowCandidate> candidates,
                                      std::span<const std::pair<double, double>> alternatives,
                                      const RegrowConfig& config) {
  if (candidates.empty()) throw ParameterError("prior grid is empty");
  if (alternatives.empty()) throw ParameterError("alternative grid is empty");
  if (config.replications < 2 || config.horizon == 0) throw ParameterError("need >= 2 replications and a horizon");
  const int na = config.n_a, nb = config.n_b;
  const std::size_t cells = static_cast<std::size_t>((na + 1) * (nb + 1));

  std::vector<TwoByTwoMixture> mixtures;
  mixtures.reserve(candidates.size());
  for (const auto& c : candidates) mixtures.emplace_back(c.prior, na, nb);

  RegrowResult res;
  res.worst_case.assign(candidates.size(), kInf);
  res.worst_case_se.assign(candidates.size(), 0.0);
  res.worst_alternative.assign(candidates.size(), 0);

  std::vector<int> hist(cells);
  std::vector<double> mean(candidates.size()), m2(candidates.size()), comp;
  for (std::size_t j = 0; j < alternatives.size(); ++j) {
    const auto [ta, tb] = alternatives[j];
    std::fill(mean.begin(), mean.end(), 0.0);
    std::fill(m2.begin(), m2.end(), 0.0);
    for (std::size_t r = 0; r < config.replications; ++r) {
      sim::RngStream rng(config.seed, j * config.replications + r);
      std::fill(hist.begin(), hist.end(), 0);
      double log_truth = 0.0;
      for (std::size_t t = 0; t < config.horizon; ++t) {
        int oa = 0, ob = 0;
        for (int i = 0; i < na; ++i) oa += sim::bernoulli(rng, ta);
        for (int i = 0; i < nb; ++i) ob += sim::bernoulli(rng, tb);
        ++hist[static_cast<std::size_t>(oa * (nb + 1) + ob)];
        log_truth += log_twobytwo_block_evalue(na, nb, oa, ob, ta, tb);
      }
      const double n_obs = static_cast<double>(r + 1);
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        const TwoByTwoMixture& mix = mixtures[c];
        const auto& w = candidates[c].prior.weights;
        comp.assign(w.size(), 0.0);
        for (std::size_t cell = 0; cell < cells; ++cell) {
          if (hist[cell] == 0) continue;
          const int oa = static_cast<int>(cell) / (nb + 1), ob = static_cast<int>(cell) % (nb + 1);
          for (std::size_t k = 0; k < w.size(); ++k) comp[k] += hist[cell] * mix.log_s(k, oa, ob);
        }
        LambdaGrid g{std::vector<double>(w.size(), 0.0), w};
        const double diff = mixture_log_wealth(g, comp) - log_truth;
        const double d = diff - mean[c];
        mean[c] += d / n_obs;
        m2[c] += d * (diff - mean[c]);
      }
    }
    const double reps = static_cast<double>(config.replications);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (mean[c] < res.worst_case[c]) {
        res.worst_case[c] = mean[c];
        res.worst_case_se[c] = std::sqrt(m2[c] / (reps - 1.0) / reps);
        res.worst_alternative[c] = j;
      }
    }
  }
  res.best = static_cast<std::size_t>(std::max_element(res.worst_case.begin(), res.worst_case.end()) -
                                      res.worst_case.begin());
  return res;
}

double profile_log_likelihood(long a1, long a0, long b1, long b0, double delta) {
  if (!(delta > -1.0 && delta < 1.0)) throw ParameterError("difference must lie in (-1, 1)");
  const double lo = std::max(0.0, -delta), hi = std::min(1.0, 1.0 - delta);
  auto loglik = [&](double ta) {
    const double tb = std::clamp(ta + delta, 0.0, 1.0);
    return xlogy(static_cast<double>(a1), ta) + xlogy(static_cast<double>(a0), 1.0 - ta) +
           xlogy(static_cast<double>(b1), tb) + xlogy(static_cast<double>(b0), 1.0 - tb);
  };
  const auto best = boost::math::tools::brent_find_minima([&](double ta) { return -loglik(ta); }, lo, hi, 60);
  return std::max({-best.second, loglik(lo), loglik(hi)});
}

TwoByTwoDifferenceCS::TwoByTwoDifferenceCS(double alpha, PairPrior prior, MeanGridSpec delta_grid)
    : alpha_(alpha), prior_(std::move(prior)), deltas_(delta_grid.points()) {
  require_alpha(alpha);
  prior_.validate();
  for (double d : deltas_)
    if (!(d > -1.0 && d < 1.0)) throw ParameterError("difference grid must lie in (-1, 1)");
}

void TwoByTwoDifferenceCS::observe(const TwoByTwoBlock& block) {
  block.validate();
  const int oa = block.ones_a(), ob = block.ones_b();
  a1_ += oa;
  a0_ += block.n_a - oa;
  b1_ += ob;
  b0_ += block.n_b - ob;
  ++blocks_;
}

double TwoByTwoDifferenceCS::log_value(double delta) const {
  std::vector<double> comp(prior_.points.size());
  for (std::size_t k = 0; k < comp.size(); ++k) {
    const auto [ta, tb] = prior_.points[k];
    comp[k] = a1_ * std::log(ta) + a0_ * std::log1p(-ta) + b1_ * std::log(tb) + b0_ * std::log1p(-tb);
  }
  LambdaGrid g{std::vector<double>(comp.size(), 0.0), prior_.weights};
  return mixture_log_wealth(g, comp) - profile_log_likelihood(a1_, a0_, b1_, b0_, delta);
}

ConfidenceBand TwoByTwoDifferenceCS::band() const {
  std::vector<bool> accepted(deltas_.size());
  for (std::size_t i = 0; i < deltas_.size(); ++i) accepted[i] = !reaches_threshold(log_value(deltas_[i]), alpha_);
  ConfidenceBand b = hull_band(deltas_, accepted, alpha_, CsMethod::twobytwo_difference);
  b.time = blocks_;
  if (b.empty) return b;
  // Widen to the neighbouring rejected grid points; beyond the grid ends the
  // difference is only known to lie in [-1, 1].
  const auto lo_it = std::find(accepted.begin(), accepted.end(), true);
  const auto first = static_cast<std::size_t>(lo_it - accepted.begin());
  const auto last = static_cast<std::size_t>(accepted.rend() - std::find(accepted.rbegin(), accepted.rend(), true)) - 1;
  b.lower = first > 0 ? deltas_[first - 1] : -1.0;
  b.upper = last + 1 < deltas_.size() ? deltas_[last + 1] : 1.0;
  return b;
}

// ---- logrank -----------------------------------------------------------------

double logrank_alternative_prob(int n_treat, int n_ctrl, double beta) {
  if (n_treat < 0 || n_ctrl < 0 || n_treat + n_ctrl == 0) throw DataError("empty risk set");
  if (n_treat == 0) return 0.0;
  if (n_ctrl == 0) return 1.0;
  // n1 e^b / (n1 e^b + n0) = 1 / (1 + (n0/n1) e^{-b})
  return 1.0 / (1.0 + static_cast<double>(n_ctrl) / n_treat * std::exp(-beta));
}

LogrankUpdate logrank_step(RiskSetState state, int event_group) {
  if (event_group != 0 && event_group != 1) throw DataError("event group must be 0 or 1");
  if (!std::isfinite(state.beta)) throw ParameterError("beta must be finite");
  if (state.n_treat < 0 || state.n_ctrl < 0) throw DataError("negative risk set");
  int& members = event_group == 1 ? state.n_treat : state.n_ctrl;
  if (members == 0) throw DataError(std::string("event in empty ") + (event_group == 1 ? "treatment" : "control") +
                                    " group");
  const double total = static_cast<double>(state.n_treat + state.n_ctrl);
  const double p_alt1 = logrank_alternative_prob(state.n_treat, state.n_ctrl, state.beta);
  const double p_alt = event_group == 1 ? p_alt1 : 1.0 - p_alt1;
  const double p_null = members / total;
  --members;
  return {state, UnitBet{p_alt / p_null}};
}

// ---- prior-posterior ratio -------------------------------------------------

PriorPosteriorRatio::PriorPosteriorRatio(DiscretePrior prior, LikelihoodModel model, double sigma)
    : prior_(std::move(prior)), model_(model), sigma_(sigma) {
  prior_.validate();
  if (model == LikelihoodModel::bernoulli)
    for (double p : prior_.points) require_open_unit(p, "Bernoulli grid point");
  if (model == LikelihoodModel::gaussian && !(sigma > 0.0)) throw ParameterError("sigma must be positive");
  loglik_.assign(prior_.points.size(), 0.0);
}

double PriorPosteriorRatio::log_lik(double theta, double x) const {
  if (model_ == LikelihoodModel::bernoulli) return x == 1.0 ? std::log(theta) : std::log1p(-theta);
  const double z = (x - theta) / sigma_;
  return -0.5 * z * z - kLogSqrt2Pi - std::log(sigma_);
}

std::vector<double> PriorPosteriorRatio::observe(double x) {
  if (model_ == LikelihoodModel::bernoulli && x != 0.0 && x != 1.0) throw DataError("Bernoulli observation must be 0 or 1");
  if (!std::isfinite(x)) throw DataError("observation is not finite");
  const std::vector<double> post = posterior();
  std::vector<double> lp(prior_.points.size());
  double pred = 0.0;
  double shift = -kInf;
  for (std::size_t k = 0; k < lp.size(); ++k) {
    lp[k] = log_lik(prior_.points[k], x);
    shift = std::max(shift, lp[k]);
  }
  for (std::size_t k = 0; k < lp.size(); ++k) pred += post[k] * std::exp(lp[k] - shift);
  const double log_pred = shift + std::log(pred);
  std::vector<double> inc(lp.size());
  for (std::size_t k = 0; k < lp.size(); ++k) {
    inc[k] = log_pred - lp[k];
    loglik_[k] += lp[k];
  }
  ++t_;
  return inc;
}

double PriorPosteriorRatio::log_ratio(std::size_t index) const {
  if (index >= prior_.points.size()) throw ParameterError("grid index out of range");
  if (!(prior_.weights[index] > 0.0)) throw ParameterError("zero prior mass at the tested parameter");
  LambdaGrid g{prior_.points, prior_.weights};
  return mixture_log_wealth(g, loglik_) - loglik_[index];
}

std::vector<double> PriorPosteriorRatio::log_ratios() const {
  std::vector<double> out(prior_.points.size(), kInf);
  for (std::size_t i = 0; i < out.size(); ++i)
    if (prior_.weights[i] > 0.0) out[i] = log_ratio(i);
  return out;
}

std::vector<double> PriorPosteriorRatio::posterior() const {
  double m = -kInf;
  for (std::size_t k = 0; k < loglik_.size(); ++k)
    if (prior_.weights[k] > 0.0) m = std::max(m, loglik_[k]);
  std::vector<double> p(loglik_.size(), 0.0);
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (prior_.weights[k] > 0.0) p[k] = prior_.weights[k] * std::exp(loglik_[k] - m);
    s += p[k];
  }
  for (double& v : p) v /= s;
  return p;
}

ConfidenceBand eposterior_interval(std::span<const double> thetas, std::span<const double> log_wealths, double alpha) {
  require_alpha(alpha);
  if (thetas.size() != log_wealths.size() || thetas.empty())
    throw ParameterError("theta grid and wealths must be nonempty and aligned");
  require_ascending(thetas);
  std::vector<bool> accepted(thetas.size());
  for (std::size_t i = 0; i < thetas.size(); ++i) accepted[i] = !reaches_threshold(log_wealths[i], alpha);
  return hull_band(thetas, accepted, alpha, CsMethod::eposterior);
}

ConfidenceBand support_interval(std::span<const double> thetas, std::span<const double> prior_weights,
                                std::span<const double> posterior, double k) {
  if (!(k > 0.0 && k < 1.0)) throw ParameterError("support level must lie in (0, 1)");
  if (thetas.size() != prior_weights.size() || thetas.size() != posterior.size() || thetas.empty())
    throw ParameterError("support-interval inputs must be nonempty and aligned");
  require_ascending(thetas);
  std::vector<bool> accepted(thetas.size());
  for (std::size_t i = 0; i < thetas.size(); ++i)
    accepted[i] = prior_weights[i] > 0.0 && posterior[i] / prior_weights[i] >= k;
  return hull_band(thetas, accepted, k, CsMethod::eposterior);
}

}  // namespace savi
