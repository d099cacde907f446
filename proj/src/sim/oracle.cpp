#include "savi/sim/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "savi/errors.hpp"

namespace savi::sim {

namespace {

// Neumaier compensated sum.
struct CompensatedSum {
  long double sum = 0.0L, comp = 0.0L;
  void add(long double x) {
    const long double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  long double value() const { return sum + comp; }
};

}  // namespace

McEstimate summarize(std::span<const double> values) {
  McEstimate e;
  e.n = values.size();
  if (e.n == 0) return e;
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - mean;
    mean += d / static_cast<double>(i + 1);
    m2 += d * (values[i] - mean);
  }
  e.mean = mean;
  if (e.n > 1) e.se = std::sqrt(m2 / static_cast<double>(e.n - 1) / static_cast<double>(e.n));
  return e;
}

bool StoppingRuleSpec::stop(std::size_t t, double log_value) const {
  const bool crossed = kind != Kind::fixed && log_value >= std::log(level);
  const bool at_horizon = kind != Kind::crossing && horizon > 0 && t >= horizon;
  return crossed || at_horizon;
}

std::vector<StoppedRun> simulate_stopped(const SequentialEProcess& prototype, const SamplerSpec& sampler,
                                         const StoppingRuleSpec& rule, std::size_t replications, std::uint64_t seed) {
  if (!rule.truncated()) throw ConfigError("stopping rule must be truncated at a finite horizon");
  if (rule.kind != StoppingRuleSpec::Kind::fixed && !(rule.level > 0.0))
    throw ConfigError("crossing level must be positive");
  std::vector<StoppedRun> runs(replications);
  for (std::size_t r = 0; r < replications; ++r) {
    RngStream rng(seed, r);
    ScalarSampler draw(sampler);
    auto proc = prototype.fresh();
    StoppedRun run;
    for (std::size_t t = 1;; ++t) {
      proc->observe(draw(rng));
      run.log_value = proc->log_value();
      run.log_running_max = std::max(run.log_running_max, run.log_value);
      if (rule.stop(t, run.log_value)) {
        run.tau = t;
        break;
      }
    }
    runs[r] = run;
  }
  return runs;
}

McEstimate mc_evalue_at_stop(const SequentialEProcess& prototype, const SamplerSpec& sampler,
                             const StoppingRuleSpec& rule, std::size_t replications, std::uint64_t seed) {
  if (replications < 1000) throw ConfigError("e-value-at-stop estimates need at least 1000 replications");
  const auto runs = simulate_stopped(prototype, sampler, rule, replications, seed);
  std::vector<double> vals(runs.size());
  std::transform(runs.begin(), runs.end(), vals.begin(), [](const StoppedRun& r) { return std::exp(r.log_value); });
  return summarize(vals);
}

BandProbe::BandProbe(std::unique_ptr<ConfidenceSequence> cs, double truth) : cs_(std::move(cs)), truth_(truth) {
  if (!cs_) throw ConfigError("probe needs a confidence sequence");
}

TruthProcessProbe::TruthProcessProbe(std::unique_ptr<CatoniCS> cs) : catoni_(std::move(cs)) {
  if (!catoni_ || catoni_->candidates().size() != 1) throw ConfigError("truth probe needs a single candidate");
}

TruthProcessProbe::TruthProcessProbe(std::unique_ptr<BettingCS> cs) : betting_(std::move(cs)) {
  if (!betting_ || betting_->candidates().size() != 1) throw ConfigError("truth probe needs a single candidate");
}

void TruthProcessProbe::observe(double x) {
  if (catoni_)
    catoni_->observe(x);
  else
    betting_->observe(x);
}

bool TruthProcessProbe::covered() const {
  return catoni_ ? !catoni_->rejects_candidate(0) : !betting_->rejects_candidate(0);
}

McEstimate mc_coverage(const ProbeFactory& make_probe, const SamplerSpec& sampler, std::size_t horizon,
                       std::size_t replications, std::uint64_t seed) {
  if (horizon == 0) throw ConfigError("coverage horizon must be positive");
  std::vector<double> miss(replications, 0.0);
  for (std::size_t r = 0; r < replications; ++r) {
    RngStream rng(seed, r);
    ScalarSampler draw(sampler);
    auto probe = make_probe();
    for (std::size_t t = 1; t <= horizon; ++t) {
      probe->observe(draw(rng));
      if (!probe->covered()) {
        miss[r] = 1.0;
        break;
      }
    }
  }
  return summarize(miss);
}

long double enumerate_exact(const BinaryProductModel& model, const BinaryStatistic& statistic) {
  const std::size_t n = model.p_one.size();
  if (n >= 64 || (std::size_t{1} << n) > kMaxEnumeratedOutcomes)
    throw CapacityError("enumeration limited to 2^20 outcomes");
  for (double p : model.p_one)
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("bit probabilities must lie in [0, 1]");
  CompensatedSum acc;
  std::vector<int> bits(n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    long double prob = 1.0L;
    for (std::size_t i = 0; i < n; ++i) {
      bits[i] = static_cast<int>((mask >> i) & 1u);
      prob *= bits[i] ? static_cast<long double>(model.p_one[i]) : 1.0L - static_cast<long double>(model.p_one[i]);
    }
    if (prob == 0.0L) continue;
    acc.add(prob * statistic(bits));
  }
  return acc.value();
}

std::vector<long double> enumerate_count_classes(std::size_t n, const BinaryStatistic& statistic) {
  if (n >= 64 || (std::size_t{1} << n) > kMaxEnumeratedOutcomes)
    throw CapacityError("enumeration limited to 2^20 outcomes");
  std::vector<CompensatedSum> sums(n + 1);
  std::vector<std::size_t> counts(n + 1, 0);
  std::vector<int> bits(n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    for (std::size_t i = 0; i < n; ++i) bits[i] = static_cast<int>((mask >> i) & 1u);
    const auto k = static_cast<std::size_t>(std::popcount(mask));
    sums[k].add(statistic(bits));
    ++counts[k];
  }
  std::vector<long double> out(n + 1);
  for (std::size_t k = 0; k <= n; ++k) out[k] = sums[k].value() / static_cast<long double>(counts[k]);
  return out;
}

}  // namespace savi::sim
