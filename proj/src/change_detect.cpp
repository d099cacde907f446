#include "savi/change_detect.hpp"

#include <algorithm>
#include <cmath>

#include "savi/errors.hpp"

namespace savi {

EDetector::EDetector(std::unique_ptr<SequentialEProcess> prototype, std::size_t cap)
    : prototype_(std::move(prototype)), cap_(cap) {
  if (!prototype_) throw ConfigError("detector needs a base e-process");
  if (cap_ == 0) throw ConfigError("pruning cap must be positive");
}

void EDetector::step(double x) {
  std::unique_ptr<SequentialEProcess> restart;
  try {
    restart = prototype_->fresh();
  } catch (const Error& e) {
    throw ConfigError(std::string("base e-process factory failed: ") + e.what());
  }
  if (!restart) throw ConfigError("base e-process factory returned nothing");
  active_.push_back(std::move(restart));
  std::vector<double> logs(active_.size());
  for (std::size_t i = 0; i < active_.size(); ++i) {
    active_[i]->observe(x);
    logs[i] = active_[i]->log_value();
  }
  ++t_;
  if (active_.size() > cap_) {
    const auto worst = static_cast<std::size_t>(std::min_element(logs.begin(), logs.end()) - logs.begin());
    active_.erase(active_.begin() + static_cast<std::ptrdiff_t>(worst));
    logs.erase(logs.begin() + static_cast<std::ptrdiff_t>(worst));
    ++pruned_;
  }
  log_value_ = log_sum_exp(logs);
}

double EDetector::value() const { return std::exp(log_value_); }

bool detector_stop(const EDetector& detector, double alpha) { return reaches_threshold(detector.log_value(), alpha); }

RunMetrics run_detector(const SequentialEProcess& prototype, const ArlConfig& config, std::uint64_t seed,
                        std::uint64_t replication) {
  require_alpha(config.alpha);
  sim::RngStream rng(seed, replication);
  sim::ScalarSampler pre(config.pre_change), post(config.post_change);
  EDetector det(prototype.fresh(), config.cap);
  RunMetrics m;
  m.change_time = config.change_time;
  for (std::size_t t = 1; t <= config.horizon; ++t) {
    const bool changed = config.change_time && t > *config.change_time;
    det.step(changed ? post(rng) : pre(rng));
    if (detector_stop(det, config.alpha)) {
      m.stop_time = t;
      break;
    }
  }
  m.false_alarm = m.stop_time && (!config.change_time || *m.stop_time <= *config.change_time);
  return m;
}

ArlSummary run_arl_experiment(const SequentialEProcess& prototype, const ArlConfig& config,
                              std::size_t replications, std::uint64_t seed) {
  if (replications < 2) throw ConfigError("need at least 2 replications");
  ArlSummary s;
  s.replications = replications;
  double mean = 0.0, m2 = 0.0, dmean = 0.0, dm2 = 0.0;
  for (std::size_t r = 0; r < replications; ++r) {
    const RunMetrics m = run_detector(prototype, config, seed, r);
    const double stop = m.stop_time ? static_cast<double>(*m.stop_time) : static_cast<double>(config.horizon);
    if (!m.stop_time) ++s.truncated;
    if (m.false_alarm) ++s.false_alarms;
    const double d = stop - mean;
    mean += d / static_cast<double>(r + 1);
    m2 += d * (stop - mean);
    if (m.stop_time && config.change_time && *m.stop_time > *config.change_time) {
      const double delay = static_cast<double>(*m.stop_time - *config.change_time);
      ++s.detections;
      const double dd = delay - dmean;
      dmean += dd / static_cast<double>(s.detections);
      dm2 += dd * (delay - dmean);
    }
  }
  const double n = static_cast<double>(replications);
  s.mean_stop = mean;
  s.stop_se = std::sqrt(m2 / (n - 1.0) / n);
  if (s.detections > 0) {
    s.mean_delay = dmean;
    const double nd = static_cast<double>(s.detections);
    s.delay_se = s.detections > 1 ? std::sqrt(dm2 / (nd - 1.0) / nd) : 0.0;
  }
  return s;
}

}  // namespace savi
