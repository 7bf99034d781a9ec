#include "structok/stats.h"

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/distributions/normal.hpp>

#include "structok/error.h"
#include "structok/util.h"

namespace structok::stats {

namespace {

const boost::math::normal_distribution<double> kStdNormal;

double normalCdf(double x) { return boost::math::cdf(kStdNormal, x); }
double normalQuantile(double p) { return boost::math::quantile(kStdNormal, p); }

double meanOf(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

// Resamples are drawn in fixed blocks of 512, each block from its own
// deterministically derived RNG stream, so thread count can never change
// the result.
constexpr int kResampleBlock = 512;

std::vector<double> bootstrapMeans(const std::vector<double>& values,
                                   int resamples, uint64_t seed) {
  const auto n = values.size();
  std::vector<double> means(static_cast<std::size_t>(resamples));
  int n_blocks = (resamples + kResampleBlock - 1) / kResampleBlock;
  for (int block = 0; block < n_blocks; ++block) {
    std::mt19937_64 rng(derivedSeed(seed, 1, static_cast<uint64_t>(block)));
    int begin = block * kResampleBlock;
    int end = std::min(resamples, begin + kResampleBlock);
    for (int b = begin; b < end; ++b) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) sum += values[rng() % n];
      means[static_cast<std::size_t>(b)] = sum / static_cast<double>(n);
    }
  }
  return means;
}

// Nearest-rank order statistic of a sorted vector at probability alpha.
double orderStatistic(const std::vector<double>& sorted, double alpha) {
  auto b = static_cast<double>(sorted.size());
  auto rank = static_cast<long>(std::ceil(alpha * b));
  rank = std::clamp<long>(rank, 1, static_cast<long>(sorted.size()));
  return sorted[static_cast<std::size_t>(rank - 1)];
}

// Midranks of the pooled sample plus the tie term sum(t^3 - t).
struct RankInfo {
  std::vector<double> ranks;  // aligned with the pooled order
  double tie_term = 0.0;
  bool has_ties = false;
};

RankInfo midranks(const std::vector<double>& pooled_sorted) {
  RankInfo info;
  info.ranks.resize(pooled_sorted.size());
  std::size_t i = 0;
  while (i < pooled_sorted.size()) {
    std::size_t j = i;
    while (j + 1 < pooled_sorted.size() &&
           pooled_sorted[j + 1] == pooled_sorted[i])
      ++j;
    double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) info.ranks[k] = rank;
    auto t = static_cast<double>(j - i + 1);
    if (t > 1.0) {
      info.tie_term += t * t * t - t;
      info.has_ties = true;
    }
    i = j + 1;
  }
  return info;
}

// Exact two-sided p for U by enumerating all C(n1+n2, n1) rank assignments
// (tie-free samples only). Counts both tails explicitly.
double exactTwoSidedP(double u_a, std::size_t n1, std::size_t n2) {
  const std::size_t total = n1 + n2;
  double mu = static_cast<double>(n1) * static_cast<double>(n2) / 2.0;
  double dist = std::abs(u_a - mu);

  int64_t matched = 0, all = 0;
  std::vector<std::size_t> pick(n1);
  for (std::size_t i = 0; i < n1; ++i) pick[i] = i;
  for (;;) {
    ++all;
    // U for this assignment: rank sum of picked positions (ranks 1-based).
    double rank_sum = 0.0;
    for (std::size_t idx : pick) rank_sum += static_cast<double>(idx + 1);
    double u = rank_sum - static_cast<double>(n1) * (static_cast<double>(n1) + 1.0) / 2.0;
    if (std::abs(u - mu) >= dist - 1e-12) ++matched;

    // Next combination.
    std::size_t k = n1;
    while (k > 0 && pick[k - 1] == total - n1 + k - 1) --k;
    if (k == 0) break;
    ++pick[k - 1];
    for (std::size_t m = k; m < n1; ++m) pick[m] = pick[m - 1] + 1;
  }
  return std::min(1.0, static_cast<double>(matched) / static_cast<double>(all));
}

struct MetricAccessor {
  const char* name;
  std::optional<double> (*get)(const metrics::MetricReport&);
};

const MetricAccessor kMetricAccessors[] = {
    {"si_short", [](const metrics::MetricReport& r) { return r.si_short; }},
    {"si_mid", [](const metrics::MetricReport& r) { return r.si_mid; }},
    {"si_long", [](const metrics::MetricReport& r) { return r.si_long; }},
    {"entropy", [](const metrics::MetricReport& r) { return r.entropy; }},
    {"consistency",
     [](const metrics::MetricReport& r) { return r.consistency; }},
    {"compression_ratio",
     [](const metrics::MetricReport& r) { return r.compression_ratio; }},
};

}  // namespace

IntervalEstimate bootstrapBcaMean(const Sample& sample, double level,
                                  int resamples, uint64_t seed) {
  const auto& values = sample.values;
  if (values.size() < 2)
    throw Error(ErrorCode::InvalidArgument,
                "bootstrap needs at least 2 values");
  if (level <= 0.0 || level >= 1.0)
    throw Error(ErrorCode::InvalidArgument, "level must be in (0,1)");
  for (double v : values)
    if (!std::isfinite(v))
      throw Error(ErrorCode::InvalidArgument, "sample contains non-finite value");

  IntervalEstimate estimate;
  estimate.level = level;
  estimate.resamples = resamples;

  bool degenerate =
      std::all_of(values.begin(), values.end(),
                  [&](double v) { return v == values.front(); });
  if (degenerate) {
    estimate.low = estimate.high = values.front();
    return estimate;
  }

  const double theta_hat = meanOf(values);
  std::vector<double> boot = bootstrapMeans(values, resamples, seed);
  std::sort(boot.begin(), boot.end());

  // Bias term with the half-count convention for ties.
  double below = 0.0;
  for (double v : boot) {
    if (v < theta_hat)
      below += 1.0;
    else if (v == theta_hat)
      below += 0.5;
  }
  double b = static_cast<double>(resamples);
  double p0 = std::clamp(below / b, 0.5 / b, 1.0 - 0.5 / b);
  double z0 = normalQuantile(p0);

  // Acceleration from jackknife skewness.
  const auto n = static_cast<double>(values.size());
  double total = theta_hat * n;
  std::vector<double> jack(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    jack[i] = (total - values[i]) / (n - 1.0);
  double jack_mean = meanOf(jack);
  double sum_sq = 0.0, sum_cu = 0.0;
  for (double v : jack) {
    double d = jack_mean - v;
    sum_sq += d * d;
    sum_cu += d * d * d;
  }
  double accel = sum_sq > 0.0 ? sum_cu / (6.0 * std::pow(sum_sq, 1.5)) : 0.0;

  auto adjusted = [&](double z_alpha) {
    double shifted = z0 + z_alpha;
    return normalCdf(z0 + shifted / (1.0 - accel * shifted));
  };
  double alpha = 1.0 - level;
  double alpha1 = adjusted(normalQuantile(alpha / 2.0));
  double alpha2 = adjusted(normalQuantile(1.0 - alpha / 2.0));

  estimate.low = orderStatistic(boot, alpha1);
  estimate.high = orderStatistic(boot, alpha2);
  if (estimate.low > estimate.high) std::swap(estimate.low, estimate.high);
  return estimate;
}

TestResult mannWhitneyU(const Sample& a, const Sample& b) {
  const auto n1 = a.values.size();
  const auto n2 = b.values.size();
  if (n1 < 1 || n2 < 1)
    throw Error(ErrorCode::InvalidArgument, "both samples must be non-empty");

  struct Tagged {
    double value;
    bool from_a;
  };
  std::vector<Tagged> pooled;
  pooled.reserve(n1 + n2);
  for (double v : a.values) pooled.push_back({v, true});
  for (double v : b.values) pooled.push_back({v, false});
  std::stable_sort(pooled.begin(), pooled.end(),
                   [](const Tagged& x, const Tagged& y) { return x.value < y.value; });

  std::vector<double> sorted_values(pooled.size());
  for (std::size_t i = 0; i < pooled.size(); ++i)
    sorted_values[i] = pooled[i].value;
  RankInfo ranks = midranks(sorted_values);

  double rank_sum_a = 0.0;
  for (std::size_t i = 0; i < pooled.size(); ++i)
    if (pooled[i].from_a) rank_sum_a += ranks.ranks[i];
  double u_a = rank_sum_a -
               static_cast<double>(n1) * (static_cast<double>(n1) + 1.0) / 2.0;

  TestResult result;
  result.u_statistic = u_a;

  double nn = static_cast<double>(n1) * static_cast<double>(n2);
  double total = static_cast<double>(n1 + n2);
  if (!ranks.has_ties && n1 + n2 <= 12) {
    result.exact = true;
    result.p_value = exactTwoSidedP(u_a, n1, n2);
  } else {
    double mu = nn / 2.0;
    double variance =
        nn / 12.0 *
        (total + 1.0 - ranks.tie_term / (total * (total - 1.0)));
    if (variance <= 0.0) {
      result.p_value = 1.0;  // all values identical across both samples
      result.z = 0.0;
    } else {
      double diff = std::max(0.0, std::abs(u_a - mu) - 0.5);  // continuity
      result.z = diff / std::sqrt(variance);
      result.p_value = std::min(1.0, 2.0 * (1.0 - normalCdf(result.z)));
    }
  }
  result.significant = result.p_value < 0.05;
  return result;
}

double improvementPct(const Sample& original, const Sample& explicit_sample) {
  if (original.values.empty() || explicit_sample.values.empty())
    throw Error(ErrorCode::InvalidArgument, "both samples must be non-empty");
  double mean_original = meanOf(original.values);
  if (mean_original == 0.0)
    throw Error(ErrorCode::UndefinedImprovement,
                "original mean is zero; improvement undefined");
  return 100.0 * (meanOf(explicit_sample.values) - mean_original) /
         mean_original;
}

ComparisonTable compareSets(const std::vector<metrics::MetricReport>& a,
                            const std::vector<metrics::MetricReport>& b,
                            const CompareConfig& config) {
  if (a.empty() || b.empty())
    throw Error(ErrorCode::InvalidArgument, "both report sets must be non-empty");

  ComparisonTable table;
  uint64_t metric_index = 0;
  for (const auto& accessor : kMetricAccessors) {
    ComparisonCell cell;
    cell.metric = accessor.name;

    Sample sample_a{.values = {}, .label = table.label_a};
    Sample sample_b{.values = {}, .label = table.label_b};
    for (const auto& report : a)
      if (auto v = accessor.get(report)) sample_a.values.push_back(*v);
    for (const auto& report : b)
      if (auto v = accessor.get(report)) sample_b.values.push_back(*v);
    cell.n_a = static_cast<int>(sample_a.values.size());
    cell.n_b = static_cast<int>(sample_b.values.size());

    if (!sample_a.values.empty()) cell.mean_a = meanOf(sample_a.values);
    if (!sample_b.values.empty()) cell.mean_b = meanOf(sample_b.values);

    if (sample_a.values.size() >= 2)
      cell.ci_a = bootstrapBcaMean(sample_a, config.level, config.resamples,
                                   derivedSeed(config.seed, 2, metric_index));
    if (sample_b.values.size() >= 2)
      cell.ci_b = bootstrapBcaMean(sample_b, config.level, config.resamples,
                                   derivedSeed(config.seed, 3, metric_index));

    if (cell.mean_a && cell.mean_b && *cell.mean_a != 0.0)
      cell.improvement_pct = improvementPct(sample_a, sample_b);

    if (cell.ci_a && cell.ci_b)
      cell.significant =
          cell.ci_a->high < cell.ci_b->low || cell.ci_b->high < cell.ci_a->low;

    if (cell.ci_a && cell.ci_b && cell.improvement_pct)
      cell.status = "ok";
    else if (cell.n_a == 0 && cell.n_b == 0)
      cell.status = "unavailable";
    else
      cell.status = "partial";

    table.cells.push_back(std::move(cell));
    ++metric_index;
  }
  return table;
}

}  // namespace structok::stats
