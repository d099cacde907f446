#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "savi/sequential.hpp"
#include "savi/sim/samplers.hpp"

namespace savi {

/// Sum of e-processes restarted at every time step. At most `cap` restarts
/// are kept; over the cap the one with the smallest wealth is dropped, so the
/// pruned value never exceeds the exact one.
class EDetector {
 public:
  static constexpr std::size_t kDefaultCap = 512;

  /// `prototype` supplies fresh restarts through fresh(); it is not observed.
  explicit EDetector(std::unique_ptr<SequentialEProcess> prototype, std::size_t cap = kDefaultCap);

  /// Starts a new process at wealth 1, then feeds x to every active process.
  void step(double x);

  double log_value() const noexcept { return log_value_; }
  double value() const;
  std::size_t time() const noexcept { return t_; }
  std::size_t active() const noexcept { return active_.size(); }
  std::size_t pruned() const noexcept { return pruned_; }

 private:
  std::unique_ptr<SequentialEProcess> prototype_;
  std::size_t cap_;
  std::vector<std::unique_ptr<SequentialEProcess>> active_;
  double log_value_ = -std::numeric_limits<double>::infinity();
  std::size_t t_ = 0;
  std::size_t pruned_ = 0;
};

/// True iff the detector value has reached 1/alpha.
bool detector_stop(const EDetector& detector, double alpha);

struct RunMetrics {
  std::optional<std::size_t> stop_time;
  std::optional<std::size_t> change_time;
  bool false_alarm = false;
};

struct ArlConfig {
  double alpha = 0.01;
  sim::SamplerSpec pre_change{sim::Family::gaussian, 0.0, 1.0};
  sim::SamplerSpec post_change{sim::Family::gaussian, 1.0, 1.0};
  /// Observations 1..nu come from pre_change, later ones from post_change.
  std::optional<std::size_t> change_time;
  /// Runs that have not stopped by the horizon count as stopping there.
  std::size_t horizon = 100000;
  std::size_t cap = EDetector::kDefaultCap;
};

struct ArlSummary {
  std::size_t replications = 0;
  double mean_stop = 0.0;
  double stop_se = 0.0;
  std::size_t truncated = 0;
  std::size_t false_alarms = 0;
  /// Over runs that stopped after the change.
  std::size_t detections = 0;
  double mean_delay = 0.0;
  double delay_se = 0.0;
};

RunMetrics run_detector(const SequentialEProcess& prototype, const ArlConfig& config, std::uint64_t seed,
                        std::uint64_t replication);

ArlSummary run_arl_experiment(const SequentialEProcess& prototype, const ArlConfig& config,
                              std::size_t replications, std::uint64_t seed);

}  // namespace savi
