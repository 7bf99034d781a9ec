// Statistical machinery: BCa bootstrap confidence intervals for per-piece
// metric means, Mann-Whitney U tests for Likert data, and the cross-notation
// comparison table.

#ifndef STRUCTOK_STATS_H_
#define STRUCTOK_STATS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "structok/metrics.h"

namespace structok::stats {

inline constexpr int kDefaultResamples = 9999;
inline constexpr double kDefaultLevel = 0.95;

struct Sample {
  std::vector<double> values;
  std::string label;
};

struct IntervalEstimate {
  double low = 0.0;
  double high = 0.0;
  double level = kDefaultLevel;
  int resamples = kDefaultResamples;
  std::string method = "BCa";
};

// Bias-corrected and accelerated bootstrap interval for the sample mean.
// Resampling is organized in fixed blocks with seeds derived from `seed`,
// so results do not depend on how callers parallelize. A sample whose
// values are all equal yields the zero-width interval (v, v).
IntervalEstimate bootstrapBcaMean(const Sample& sample,
                                  double level = kDefaultLevel,
                                  int resamples = kDefaultResamples,
                                  uint64_t seed = 0);

struct TestResult {
  double u_statistic = 0.0;  // U of the first sample
  double z = 0.0;            // 0 when the exact enumeration was used
  double p_value = 1.0;      // two-sided
  bool significant = false;  // p < 0.05
  bool exact = false;        // exact enumeration (n1+n2 <= 12, no ties)
};

TestResult mannWhitneyU(const Sample& a, const Sample& b);

// 100 * (mean(explicit) - mean(original)) / mean(original). Throws
// UndefinedImprovement when mean(original) == 0.
double improvementPct(const Sample& original, const Sample& explicit_sample);

struct ComparisonCell {
  std::string metric;
  int n_a = 0;
  int n_b = 0;
  std::optional<IntervalEstimate> ci_a;
  std::optional<IntervalEstimate> ci_b;
  std::optional<double> mean_a;
  std::optional<double> mean_b;
  std::optional<double> improvement_pct;
  bool significant = false;  // disjoint confidence intervals
  std::string status;        // "ok" or why the cell is partial
};

struct ComparisonTable {
  std::string label_a = "original";
  std::string label_b = "explicit";
  std::vector<ComparisonCell> cells;
};

struct CompareConfig {
  double level = kDefaultLevel;
  int resamples = kDefaultResamples;
  uint64_t seed = 0;
};

// Assembles the per-metric comparison (CI pairs, improvement, significance
// flag) from two sets of per-piece metric reports.
ComparisonTable compareSets(const std::vector<metrics::MetricReport>& a,
                            const std::vector<metrics::MetricReport>& b,
                            const CompareConfig& config = {});

}  // namespace structok::stats

#endif  // STRUCTOK_STATS_H_
