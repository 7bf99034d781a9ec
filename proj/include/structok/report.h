// Serialization of metric reports, comparison tables, corpus statistics and
// survey results to JSON, CSV and aligned text tables.

#ifndef STRUCTOK_REPORT_H_
#define STRUCTOK_REPORT_H_

#include <string>
#include <vector>

#include "structok/metrics.h"
#include "structok/stats.h"
#include "structok/tokenizer.h"

namespace structok::report {

std::string metricReportsToJson(const std::vector<metrics::MetricReport>& reports);
std::vector<metrics::MetricReport> metricReportsFromJson(const std::string& json);
std::string metricReportsToCsv(const std::vector<metrics::MetricReport>& reports);

std::string comparisonToJson(const stats::ComparisonTable& table);
std::string comparisonToCsv(const stats::ComparisonTable& table);

// Text table mirroring the CI-pair / improvement / significance-marker
// layout; significant cells carry a '*' marker column.
std::string comparisonToText(const stats::ComparisonTable& table);

struct SplitCounts {
  int total = 0;
  int train = 0;
  int validation = 0;
  int test = 0;
};

struct CorpusStatsTable {
  std::string dataset;
  SplitCounts counts;
  std::vector<tokenizer::CorpusStats> per_kind;
  std::vector<std::string> missing_files;
};

std::string corpusStatsToJson(const CorpusStatsTable& table);
std::string corpusStatsToText(const CorpusStatsTable& table);

}  // namespace structok::report

#endif  // STRUCTOK_REPORT_H_
