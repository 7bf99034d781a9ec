#include "structok/report.h"

#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "structok/error.h"

namespace structok::report {

namespace {

using nlohmann::json;

json optionalToJson(const std::optional<double>& value) {
  if (value) return *value;
  return nullptr;
}

std::optional<double> optionalFromJson(const json& value) {
  if (value.is_null()) return std::nullopt;
  return value.get<double>();
}

std::string csvOptional(const std::optional<double>& value) {
  if (!value) return "";
  std::ostringstream out;
  out.precision(9);
  out << *value;
  return out.str();
}

std::string ciText(const std::optional<stats::IntervalEstimate>& ci) {
  if (!ci) return "--";
  std::ostringstream out;
  out << '(' << std::fixed << std::setprecision(3) << ci->low << ", "
      << ci->high << ')';
  return out.str();
}

}  // namespace

std::string metricReportsToJson(const std::vector<metrics::MetricReport>& reports) {
  json array = json::array();
  for (const auto& r : reports) {
    json item;
    item["piece_id"] = r.piece_id;
    item["note_count"] = r.note_count;
    item["duration_s"] = r.duration_s;
    item["anomalies"] = r.anomalies;
    item["si_short"] = optionalToJson(r.si_short);
    item["si_mid"] = optionalToJson(r.si_mid);
    item["si_long"] = optionalToJson(r.si_long);
    item["entropy"] = optionalToJson(r.entropy);
    item["consistency"] = optionalToJson(r.consistency);
    item["compression_ratio"] = optionalToJson(r.compression_ratio);
    array.push_back(item);
  }
  return array.dump(2) + "\n";
}

std::vector<metrics::MetricReport> metricReportsFromJson(const std::string& text) {
  json array;
  try {
    array = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedInput, e.what());
  }
  if (!array.is_array())
    throw Error(ErrorCode::MalformedInput, "expected a JSON array of reports");
  std::vector<metrics::MetricReport> reports;
  for (const auto& item : array) {
    metrics::MetricReport r;
    r.piece_id = item.value("piece_id", "");
    r.note_count = item.value("note_count", 0);
    r.duration_s = item.value("duration_s", 0.0);
    r.anomalies = item.value("anomalies", 0);
    r.si_short = optionalFromJson(item.value("si_short", json()));
    r.si_mid = optionalFromJson(item.value("si_mid", json()));
    r.si_long = optionalFromJson(item.value("si_long", json()));
    r.entropy = optionalFromJson(item.value("entropy", json()));
    r.consistency = optionalFromJson(item.value("consistency", json()));
    r.compression_ratio =
        optionalFromJson(item.value("compression_ratio", json()));
    reports.push_back(std::move(r));
  }
  return reports;
}

std::string metricReportsToCsv(const std::vector<metrics::MetricReport>& reports) {
  std::ostringstream out;
  out << "piece_id,note_count,duration_s,anomalies,si_short,si_mid,si_long,"
         "entropy,consistency,compression_ratio\n";
  out.precision(9);
  for (const auto& r : reports) {
    out << r.piece_id << ',' << r.note_count << ',' << r.duration_s << ','
        << r.anomalies << ',' << csvOptional(r.si_short) << ','
        << csvOptional(r.si_mid) << ',' << csvOptional(r.si_long) << ','
        << csvOptional(r.entropy) << ',' << csvOptional(r.consistency) << ','
        << csvOptional(r.compression_ratio) << '\n';
  }
  return out.str();
}

std::string comparisonToJson(const stats::ComparisonTable& table) {
  json doc;
  doc["label_a"] = table.label_a;
  doc["label_b"] = table.label_b;
  json cells = json::array();
  for (const auto& cell : table.cells) {
    json item;
    item["metric"] = cell.metric;
    item["n_a"] = cell.n_a;
    item["n_b"] = cell.n_b;
    item["mean_a"] = optionalToJson(cell.mean_a);
    item["mean_b"] = optionalToJson(cell.mean_b);
    if (cell.ci_a) {
      item["ci_a"] = {{"low", cell.ci_a->low},
                      {"high", cell.ci_a->high},
                      {"level", cell.ci_a->level},
                      {"resamples", cell.ci_a->resamples},
                      {"method", cell.ci_a->method}};
    } else {
      item["ci_a"] = nullptr;
    }
    if (cell.ci_b) {
      item["ci_b"] = {{"low", cell.ci_b->low},
                      {"high", cell.ci_b->high},
                      {"level", cell.ci_b->level},
                      {"resamples", cell.ci_b->resamples},
                      {"method", cell.ci_b->method}};
    } else {
      item["ci_b"] = nullptr;
    }
    item["improvement_pct"] = optionalToJson(cell.improvement_pct);
    item["significant"] = cell.significant;
    item["status"] = cell.status;
    cells.push_back(item);
  }
  doc["cells"] = cells;
  return doc.dump(2) + "\n";
}

std::string comparisonToCsv(const stats::ComparisonTable& table) {
  std::ostringstream out;
  out << "metric,n_a,ci_a_low,ci_a_high,n_b,ci_b_low,ci_b_high,"
         "improvement_pct,significant,status\n";
  out.precision(9);
  for (const auto& cell : table.cells) {
    out << cell.metric << ',' << cell.n_a << ',';
    if (cell.ci_a) out << cell.ci_a->low << ',' << cell.ci_a->high;
    else out << ',';
    out << ',' << cell.n_b << ',';
    if (cell.ci_b) out << cell.ci_b->low << ',' << cell.ci_b->high;
    else out << ',';
    out << ',' << csvOptional(cell.improvement_pct) << ','
        << (cell.significant ? 1 : 0) << ',' << cell.status << '\n';
  }
  return out.str();
}

std::string comparisonToText(const stats::ComparisonTable& table) {
  std::ostringstream out;
  out << std::left << std::setw(20) << "Metric" << std::setw(20)
      << table.label_a << std::setw(20) << table.label_b << std::setw(14)
      << "Improvement" << "Sig\n";
  for (const auto& cell : table.cells) {
    std::string improvement = "--";
    if (cell.improvement_pct) {
      std::ostringstream pct;
      pct << std::showpos << std::fixed << std::setprecision(2)
          << *cell.improvement_pct << '%';
      improvement = pct.str();
    }
    out << std::left << std::setw(20) << cell.metric << std::setw(20)
        << ciText(cell.ci_a) << std::setw(20) << ciText(cell.ci_b)
        << std::setw(14) << improvement << (cell.significant ? "*" : "")
        << '\n';
  }
  return out.str();
}

std::string corpusStatsToJson(const CorpusStatsTable& table) {
  json doc;
  doc["dataset"] = table.dataset;
  doc["total_files"] = table.counts.total;
  doc["train_files"] = table.counts.train;
  doc["validation_files"] = table.counts.validation;
  doc["test_files"] = table.counts.test;
  json kinds = json::array();
  for (const auto& stats : table.per_kind) {
    json item;
    item["kind"] = tokenizer::kindName(stats.kind);
    item["files"] = stats.file_count;
    item["avg_length"] = stats.mean_length;
    item["avg_uniques"] = stats.mean_unique;
    json families;
    for (const auto& [name, count] : stats.family_counts)
      families[name] = count;
    item["family_counts"] = families;
    kinds.push_back(item);
  }
  doc["per_kind"] = kinds;
  if (!table.missing_files.empty()) doc["missing_files"] = table.missing_files;
  return doc.dump(2) + "\n";
}

std::string corpusStatsToText(const CorpusStatsTable& table) {
  std::ostringstream out;
  out << "Dataset: " << table.dataset << "\n";
  out << std::left << std::setw(16) << "";
  for (const auto& stats : table.per_kind)
    out << std::setw(14) << tokenizer::kindName(stats.kind);
  out << '\n';
  auto row = [&](const std::string& label, auto getter) {
    out << std::left << std::setw(16) << label;
    for (const auto& stats : table.per_kind)
      out << std::setw(14) << getter(stats);
    out << '\n';
  };
  row("Total Files", [&](const auto&) { return table.counts.total; });
  row("Train Files", [&](const auto&) { return table.counts.train; });
  row("Val. Files", [&](const auto&) { return table.counts.validation; });
  row("Test Files", [&](const auto&) { return table.counts.test; });
  out << std::left << std::setw(16) << "Avg. Length";
  for (const auto& stats : table.per_kind) {
    std::ostringstream cell;
    cell << std::fixed << std::setprecision(1) << stats.mean_length;
    out << std::setw(14) << cell.str();
  }
  out << '\n' << std::left << std::setw(16) << "Avg. Uniques";
  for (const auto& stats : table.per_kind) {
    std::ostringstream cell;
    cell << std::fixed << std::setprecision(1) << stats.mean_unique;
    out << std::setw(14) << cell.str();
  }
  out << '\n';
  if (!table.missing_files.empty()) {
    out << "Missing files (excluded):\n";
    for (const auto& path : table.missing_files) out << "  " << path << '\n';
  }
  return out.str();
}

}  // namespace structok::report
