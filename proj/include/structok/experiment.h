// End-to-end experiment: tokenize the train split under both notations,
// train a Markov model per notation, generate continuations from test-split
// primers, score all four structural metrics, and assemble the
// cross-notation comparison with bootstrap confidence intervals.

#ifndef STRUCTOK_EXPERIMENT_H_
#define STRUCTOK_EXPERIMENT_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "structok/harness.h"
#include "structok/manifest.h"
#include "structok/metrics.h"
#include "structok/report.h"
#include "structok/stats.h"

namespace structok {

struct RunConfig {
  uint64_t seed = 0;
  int workers = 0;  // 0 = hardware concurrency
  metrics::MetricParams metric_params;
  gen::HarnessConfig harness;  // harness.seed is derived from `seed`
  int markov_order = gen::kDefaultMarkovOrder;
  double markov_alpha = gen::kDefaultMarkovAlpha;
  double bootstrap_level = stats::kDefaultLevel;
  int bootstrap_resamples = stats::kDefaultResamples;
};

std::string runConfigToJson(const RunConfig& config);
RunConfig runConfigFromJson(const std::string& json);

struct ExperimentResult {
  stats::ComparisonTable comparison;
  std::vector<metrics::MetricReport> reports_onoff;
  std::vector<metrics::MetricReport> reports_explicit;
  std::filesystem::path out_dir;
};

// Runs the full pipeline and writes every artifact (models, generated
// token files, decoded MIDI, per-piece metrics, comparison tables, the
// run config) under out_dir. Output bytes depend only on (inputs, config).
// Timing lines go to `log` when provided and to out_dir/run_log.txt.
ExperimentResult runExperiment(const DatasetManifest& manifest,
                               const RunConfig& config,
                               const std::filesystem::path& out_dir,
                               std::ostream* log = nullptr);

// Tokenizes every manifest file under both notations and assembles the
// split counts / average length / average uniques table. Unreadable files
// are listed and excluded.
report::CorpusStatsTable buildCorpusStatsTable(const DatasetManifest& manifest,
                                               int workers = 0);

}  // namespace structok

#endif  // STRUCTOK_EXPERIMENT_H_
