#include "savi/mult_testing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "savi/eprocess.hpp"
#include "savi/errors.hpp"

namespace savi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DecisionReport prepare(std::string name, std::span<const double> stat, double alpha) {
  require_alpha(alpha);
  if (stat.empty()) throw ParameterError("need at least one hypothesis");
  DecisionReport r;
  r.procedure = std::move(name);
  r.alpha = alpha;
  r.statistic.assign(stat.begin(), stat.end());
  r.threshold.assign(stat.size(), 0.0);
  r.rank.assign(stat.size(), 0);
  r.rejected_flag.assign(stat.size(), false);
  return r;
}

// Step-up over a stable sort; `better(a, b)` orders more significant first and
// `passes(stat, k)` is the rank-k test.
template <class Better, class Passes, class Threshold>
void step_up(DecisionReport& r, Better better, Passes passes, Threshold thr) {
  const std::size_t K = r.statistic.size();
  std::vector<std::size_t> order(K);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return better(r.statistic[a], r.statistic[b]); });
  for (std::size_t k = 1; k <= K; ++k) {
    const std::size_t i = order[k - 1];
    r.rank[i] = k;
    r.threshold[i] = thr(k);
    if (passes(r.statistic[i], k)) r.k_star = k;
  }
  for (std::size_t k = 0; k < r.k_star; ++k) {
    r.rejected.push_back(order[k]);
    r.rejected_flag[order[k]] = true;
  }
}

DecisionReport bh_on(std::string name, std::span<const double> p, double alpha) {
  DecisionReport r = prepare(std::move(name), p, alpha);
  const double K = static_cast<double>(p.size());
  step_up(
      r, [](double a, double b) { return a < b; },
      // Cross-multiplied with a relative slack so exact boundary ties reject.
      [&](double s, std::size_t k) { return s * K <= alpha * static_cast<double>(k) * (1.0 + 1e-12); },
      [&](std::size_t k) { return alpha * static_cast<double>(k) / K; });
  return r;
}

}  // namespace

DecisionReport ebh(std::span<const double> evalues, double alpha) {
  for (double e : evalues)
    if (!(e >= 0.0)) throw DataError("e-values must be nonnegative");
  DecisionReport r = prepare("e-BH", evalues, alpha);
  const double K = static_cast<double>(evalues.size());
  // e >= K / (k alpha) is tested as e k alpha >= K so that the exact boundary
  // survives rounding of the threshold.
  step_up(
      r, [](double a, double b) { return a > b; },
      [&](double e, std::size_t k) { return e * static_cast<double>(k) * alpha >= K * (1.0 - 1e-12); },
      [&](std::size_t k) { return K / (static_cast<double>(k) * alpha); });
  return r;
}

DecisionReport bh(std::span<const double> pvalues, double alpha) {
  for (double p : pvalues)
    if (!(p >= 0.0 && p <= 1.0)) throw DataError("p-values must lie in [0, 1]");
  return bh_on("BH", pvalues, alpha);
}

double eby_adjusted_level(std::size_t K, std::size_t selected, double alpha) {
  require_alpha(alpha);
  if (selected == 0) throw ParameterError("selection is empty");
  if (selected > K) throw ParameterError("selection larger than the number of parameters");
  return alpha * static_cast<double>(selected) / static_cast<double>(K);
}

double by_adjusted_level(std::size_t K, std::size_t selected, double alpha) {
  const double base = eby_adjusted_level(K, selected, alpha);
  double h = 0.0;
  for (std::size_t j = 1; j <= K; ++j) h += 1.0 / static_cast<double>(j);
  return base / h;
}

DecisionReport evalue_weighted_bh(std::span<const double> pvalues, std::span<const double> weights, double alpha) {
  if (pvalues.size() != weights.size()) throw ParameterError("p-values and weights differ in length");
  std::vector<double> q(pvalues.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!(pvalues[i] >= 0.0 && pvalues[i] <= 1.0)) throw DataError("p-values must lie in [0, 1]");
    if (!(weights[i] >= 0.0)) throw DataError("weights must be nonnegative");
    q[i] = weights[i] == 0.0 ? kInf : pvalues[i] / weights[i];
  }
  return bh_on("e-weighted BH", q, alpha);
}

}  // namespace savi
