#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace savi {

/// Outcome of a multiple-testing procedure over K hypotheses.
struct DecisionReport {
  std::string procedure;
  double alpha = 0.0;
  std::size_t k_star = 0;
  /// Rejected hypothesis indices, in the procedure's sorted order.
  std::vector<std::size_t> rejected;
  /// rejected_flag[i] is true iff hypothesis i is rejected.
  std::vector<bool> rejected_flag;
  /// Per hypothesis: the statistic that was thresholded (e-value, p-value or
  /// weighted p-value) and the threshold at its sorted rank.
  std::vector<double> statistic;
  std::vector<double> threshold;
  std::vector<std::size_t> rank;  // 1-based rank in the sorted order
};

/// e-BH: rejects the k* largest e-values, k* = max{k : e_[k] >= K / (k alpha)}.
/// Ties keep input order; +inf sorts first. Negative or NaN e-values throw
/// DataError.
DecisionReport ebh(std::span<const double> evalues, double alpha);

/// BH: rejects the k* smallest p-values, k* = max{k : p_(k) <= alpha k / K}.
DecisionReport bh(std::span<const double> pvalues, double alpha);

/// alpha |S| / K: level for e-CIs reported on a selected subset S.
double eby_adjusted_level(std::size_t K, std::size_t selected, double alpha);

/// BY baseline for p-value CIs with R = |S|: alpha |S| / (K * sum_{j<=K} 1/j).
double by_adjusted_level(std::size_t K, std::size_t selected, double alpha);

/// BH on p_i / e_i with p / 0 treated as +inf (never rejected).
DecisionReport evalue_weighted_bh(std::span<const double> pvalues, std::span<const double> weights, double alpha);

}  // namespace savi
