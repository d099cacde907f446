#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "savi/conf_seq.hpp"
#include "savi/sequential.hpp"
#include "savi/sim/samplers.hpp"

namespace savi::sim {

/// Monte Carlo estimate with standard error sd / sqrt(n).
struct McEstimate {
  double mean = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};

McEstimate summarize(std::span<const double> values);

/// When to stop a path. The decision at t depends only on values up to t.
struct StoppingRuleSpec {
  enum class Kind { fixed, crossing, crossing_or_fixed };
  Kind kind = Kind::fixed;
  std::size_t horizon = 0;  // T; 0 means none
  double level = 0.0;       // crossing level on the value scale (not log)

  static StoppingRuleSpec fixed(std::size_t T) { return {Kind::fixed, T, 0.0}; }
  static StoppingRuleSpec crossing(double c) { return {Kind::crossing, 0, c}; }
  static StoppingRuleSpec crossing_or_fixed(double c, std::size_t T) { return {Kind::crossing_or_fixed, T, c}; }

  bool truncated() const noexcept { return kind != Kind::crossing && horizon > 0; }
  /// Stop now, having seen t observations with the given log value?
  bool stop(std::size_t t, double log_value) const;
};

/// One simulated path, stopped.
struct StoppedRun {
  std::size_t tau = 0;
  double log_value = 0.0;
  double log_running_max = 0.0;
};

/// Runs `replications` independent paths of prototype.fresh() on data from
/// `sampler`; replication r uses RngStream(seed, r). Throws ConfigError for
/// untruncated rules.
std::vector<StoppedRun> simulate_stopped(const SequentialEProcess& prototype, const SamplerSpec& sampler,
                                         const StoppingRuleSpec& rule, std::size_t replications, std::uint64_t seed);

/// Mean of the stopped value. Requires at least 1000 replications.
McEstimate mc_evalue_at_stop(const SequentialEProcess& prototype, const SamplerSpec& sampler,
                             const StoppingRuleSpec& rule, std::size_t replications, std::uint64_t seed);

/// Checks whether the truth has stayed covered so far.
class CoverageProbe {
 public:
  virtual ~CoverageProbe() = default;
  virtual void observe(double x) = 0;
  virtual bool covered() const = 0;
};

/// Covered while the reported band contains the truth.
class BandProbe final : public CoverageProbe {
 public:
  BandProbe(std::unique_ptr<ConfidenceSequence> cs, double truth);
  void observe(double x) override { cs_->observe(x); }
  bool covered() const override { return cs_->band().contains(truth_); }

 private:
  std::unique_ptr<ConfidenceSequence> cs_;
  double truth_;
};

/// Runs only the candidate equal to the truth and reports coverage while it
/// is not rejected. For a grid method whose grid contains the truth this can
/// only over-count miscoverage relative to the reported band.
class TruthProcessProbe final : public CoverageProbe {
 public:
  /// Catoni or betting sequence built on the single candidate {truth}.
  explicit TruthProcessProbe(std::unique_ptr<CatoniCS> cs);
  explicit TruthProcessProbe(std::unique_ptr<BettingCS> cs);
  void observe(double x) override;
  bool covered() const override;

 private:
  std::unique_ptr<CatoniCS> catoni_;
  std::unique_ptr<BettingCS> betting_;
};

using ProbeFactory = std::function<std::unique_ptr<CoverageProbe>()>;

/// Fraction of replications in which the truth leaves the band at some t <= T.
McEstimate mc_coverage(const ProbeFactory& make_probe, const SamplerSpec& sampler, std::size_t horizon,
                       std::size_t replications, std::uint64_t seed);

// ---- exact enumeration --------------------------------------------------------

inline constexpr std::size_t kMaxEnumeratedOutcomes = std::size_t{1} << 20;

/// Independent bits, bit i equal to 1 with probability p_one[i].
struct BinaryProductModel {
  std::vector<double> p_one;
};

using BinaryStatistic = std::function<long double(std::span<const int>)>;

/// Exact E[statistic] by enumerating all 2^n outcomes with compensated long
/// double summation. Throws CapacityError above 2^20 outcomes.
long double enumerate_exact(const BinaryProductModel& model, const BinaryStatistic& statistic);

/// Average of the statistic over all length-n sequences with k ones, for
/// k = 0..n. Every exchangeable law on {0,1}^n is a mixture of these uniform
/// count-class laws, so the largest entry bounds the expectation under all of them.
std::vector<long double> enumerate_count_classes(std::size_t n, const BinaryStatistic& statistic);

}  // namespace savi::sim
