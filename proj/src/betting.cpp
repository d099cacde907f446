#include "savi/betting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "savi/errors.hpp"

namespace savi {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double LegalRange::clamp(double lambda) const noexcept { return std::clamp(lambda, lo, hi); }

LegalRange bounded_range(double mu, double c) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw ParameterError("candidate mean must lie in [0, 1]");
  if (!(c > 0.0 && c < 1.0)) throw ParameterError("truncation constant must lie in (0, 1)");
  return {mu < 1.0 ? -c / (1.0 - mu) : -kInf, mu > 0.0 ? c / mu : kInf};
}

void HistoryStats::update(double x) noexcept {
  const double prev_mean = mean();
  rss_ += (x - prev_mean) * (x - prev_mean);
  sum_ += x;
  ++n_;
}

double HistoryStats::mean() const noexcept { return (0.5 + sum_) / static_cast<double>(n_ + 1); }

double HistoryStats::variance() const noexcept { return (0.25 + rss_) / static_cast<double>(n_ + 1); }

void LambdaGrid::validate() const {
  if (points.empty()) throw ParameterError("lambda grid is empty");
  if (points.size() != weights.size()) throw ParameterError("lambda grid points and weights differ in length");
  double s = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i])) throw ParameterError("lambda grid point is not finite");
    if (!(weights[i] >= 0.0)) throw ParameterError("lambda grid weights must be nonnegative");
    s += weights[i];
  }
  if (std::abs(s - 1.0) > 1e-12) throw ParameterError("lambda grid weights must sum to 1");
}

LambdaGrid default_lambda_grid(double hi, Side side, std::size_t n) {
  if (!(hi > 0.0) || !std::isfinite(hi)) throw ParameterError("grid upper end must be positive and finite");
  if (n == 0) throw ParameterError("grid needs at least one point");
  LambdaGrid g;
  const double sign = side == Side::upper ? 1.0 : -1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double frac = n == 1 ? 1.0 : static_cast<double>(k) / static_cast<double>(n - 1);
    g.points.push_back(sign * hi * std::exp2(-10.0 * (1.0 - frac)));
    g.weights.push_back(1.0 / static_cast<double>(n));
  }
  return g;
}

BetPolicy BetPolicy::fixed(double lambda, double c) {
  BetPolicy p;
  p.kind = Kind::fixed;
  p.lambda = lambda;
  p.c = c;
  p.validate();
  return p;
}

BetPolicy BetPolicy::plugin(double c, double alpha_ref) {
  BetPolicy p;
  p.kind = Kind::plugin_empirical;
  p.c = c;
  p.alpha_ref = alpha_ref;
  p.validate();
  return p;
}

BetPolicy BetPolicy::mixture(LambdaGrid grid, double c) {
  BetPolicy p;
  p.kind = Kind::grid_mixture;
  p.grid = std::move(grid);
  p.c = c;
  p.validate();
  return p;
}

void BetPolicy::validate() const {
  if (!(c > 0.0 && c < 1.0)) throw ParameterError("truncation constant must lie in (0, 1)");
  if (!(alpha_ref > 0.0 && alpha_ref < 1.0)) throw ParameterError("reference alpha must lie in (0, 1)");
  if (!(variance_floor > 0.0)) throw ParameterError("variance floor must be positive");
  if (kind == Kind::fixed && !std::isfinite(lambda)) throw ParameterError("fixed lambda must be finite");
  if (kind == Kind::grid_mixture && !grid.points.empty()) grid.validate();
}

double next_bet_fixed(const BetPolicy& policy, const LegalRange& range) {
  if (policy.kind != BetPolicy::Kind::fixed) throw ParameterError("policy is not fixed");
  return range.clamp(policy.lambda);
}

double plugin_magnitude(const HistoryStats& stats, double alpha_ref, double variance_floor) {
  const double log_term = 2.0 * std::log(2.0 / alpha_ref);
  if (stats.count() == 0) return std::sqrt(log_term);
  const double t = static_cast<double>(stats.count() + 1);
  const double var = std::max(variance_floor, stats.variance());
  return std::sqrt(log_term / (var * t * std::log(t + 1.0)));
}

double next_bet_plugin(const BetPolicy& policy, const HistoryStats& stats, const LegalRange& range, Side side) {
  if (policy.kind != BetPolicy::Kind::plugin_empirical) throw ParameterError("policy is not plug-in");
  const double mag = plugin_magnitude(stats, policy.alpha_ref, policy.variance_floor);
  return side == Side::upper ? std::clamp(mag, 0.0, std::max(0.0, range.hi))
                             : std::clamp(-mag, std::min(0.0, range.lo), 0.0);
}

double log_sum_exp(std::span<const double> log_terms) {
  double m = -kInf;
  for (double v : log_terms) m = std::max(m, v);
  if (m == -kInf) return -kInf;
  if (m == kInf) return kInf;
  double s = 0.0;
  for (double v : log_terms) s += std::exp(v - m);
  return m + std::log(s);
}

double mixture_log_wealth(const LambdaGrid& grid, std::span<const double> per_lambda_log_wealths) {
  if (grid.weights.size() != per_lambda_log_wealths.size())
    throw ParameterError("grid and log-wealth lists differ in length");
  double m = -kInf;
  for (std::size_t k = 0; k < grid.weights.size(); ++k)
    if (grid.weights[k] > 0.0) m = std::max(m, per_lambda_log_wealths[k]);
  if (m == -kInf || m == kInf) return m;
  double s = 0.0;
  for (std::size_t k = 0; k < grid.weights.size(); ++k)
    if (grid.weights[k] > 0.0) s += grid.weights[k] * std::exp(per_lambda_log_wealths[k] - m);
  return m + std::log(s);
}

double next_bet_mixture(const LambdaGrid& grid, std::span<const double> per_lambda_log_wealths) {
  if (grid.points.size() != per_lambda_log_wealths.size())
    throw ParameterError("grid and log-wealth lists differ in length");
  double m = -kInf;
  for (std::size_t k = 0; k < grid.points.size(); ++k)
    if (grid.weights[k] > 0.0) m = std::max(m, per_lambda_log_wealths[k]);
  if (m == -kInf) return 0.0;
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < grid.points.size(); ++k) {
    if (grid.weights[k] <= 0.0) continue;
    const double w = grid.weights[k] * std::exp(per_lambda_log_wealths[k] - m);
    num += w * grid.points[k];
    den += w;
  }
  return num / den;
}

BoundedBettor::BoundedBettor(BetPolicy policy, double mu, Side side)
    : policy_(std::move(policy)), mu_(mu), side_(side), range_(bounded_range(mu, policy_.c)) {
  policy_.validate();
  if (policy_.kind == BetPolicy::Kind::grid_mixture) {
    if (policy_.grid.points.empty()) {
      const double edge = side == Side::upper ? range_.hi : -range_.lo;
      policy_.grid = default_lambda_grid(std::isfinite(edge) ? edge : 1024.0 * policy_.c, side);
    }
    for (double& p : policy_.grid.points) p = range_.clamp(p);
    grid_log_wealth_.assign(policy_.grid.points.size(), 0.0);
  }
}

double BoundedBettor::next_lambda() const {
  switch (policy_.kind) {
    case BetPolicy::Kind::fixed:
      return range_.clamp(side_ == Side::upper ? std::abs(policy_.lambda) : -std::abs(policy_.lambda));
    case BetPolicy::Kind::plugin_empirical: return next_bet_plugin(policy_, stats_, range_, side_);
    case BetPolicy::Kind::grid_mixture: return next_bet_mixture(policy_.grid, grid_log_wealth_);
  }
  return 0.0;
}

double BoundedBettor::observe(double x) {
  const double lambda = next_lambda();
  const double log_factor = std::log1p(lambda * (x - mu_));
  for (std::size_t k = 0; k < grid_log_wealth_.size(); ++k)
    grid_log_wealth_[k] += std::log1p(policy_.grid.points[k] * (x - mu_));
  stats_.update(x);
  return log_factor;
}

}  // namespace savi
