#include "structok/survey.h"

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <map>
#include <sstream>

#include <json.hpp>

#include "structok/error.h"
#include "structok/stats.h"

namespace structok::stats {

namespace {

std::vector<std::string> splitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(field);
  for (auto& f : fields) {
    auto begin = f.find_first_not_of(" \t");
    auto end = f.find_last_not_of(" \t");
    f = begin == std::string::npos ? "" : f.substr(begin, end - begin + 1);
  }
  return fields;
}

std::string lowered(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

SurveyCell makeCell(const std::vector<double>& original,
                    const std::vector<double>& explicit_scores) {
  SurveyCell cell;
  cell.n_original = static_cast<int>(original.size());
  cell.n_explicit = static_cast<int>(explicit_scores.size());
  auto mean = [](const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
  };
  cell.mean_original = mean(original);
  cell.mean_explicit = mean(explicit_scores);
  if (cell.n_original >= 2 && cell.n_explicit >= 2) {
    TestResult test = mannWhitneyU({original, "original"},
                                   {explicit_scores, "explicit"});
    cell.p_value = test.p_value;
    cell.significant = test.significant;
  }
  return cell;
}

}  // namespace

SurveyData parseSurveyCsv(const std::string& text) {
  SurveyData data;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fields = splitCsvLine(line);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() < 6 || lowered(fields[0]) != "dataset" ||
          lowered(fields[1]) != "notation")
        throw Error(ErrorCode::MalformedInput,
                    "survey CSV must start with header "
                    "dataset,notation,O,I,S,R");
      continue;
    }
    if (fields.size() != 6) {
      data.errors.push_back("line " + std::to_string(line_no) +
                            ": expected 6 fields, got " +
                            std::to_string(fields.size()));
      continue;
    }
    SurveyRow row;
    row.dataset = fields[0];
    std::string notation = lowered(fields[1]);
    if (notation == "explicit") {
      row.is_explicit = true;
    } else if (notation == "original" || notation == "onoff") {
      row.is_explicit = false;
    } else {
      data.errors.push_back("line " + std::to_string(line_no) +
                            ": unknown notation '" + fields[1] + "'");
      continue;
    }
    bool ok = true;
    for (int q = 0; q < 4; ++q) {
      const std::string& f = fields[static_cast<std::size_t>(q) + 2];
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
      if (ec != std::errc() || ptr != f.data() + f.size() || value < 1.0 ||
          value > 5.0) {
        data.errors.push_back("line " + std::to_string(line_no) +
                              ": bad Likert value '" + f + "'");
        ok = false;
        break;
      }
      row.scores[static_cast<std::size_t>(q)] = value;
    }
    if (ok) data.rows.push_back(std::move(row));
  }
  return data;
}

SurveyReport analyzeSurvey(const SurveyData& data) {
  std::map<std::string, std::vector<const SurveyRow*>> by_dataset;
  for (const auto& row : data.rows) by_dataset[row.dataset].push_back(&row);

  SurveyReport report;
  auto buildRow = [](const std::string& name,
                     const std::vector<const SurveyRow*>& rows) {
    SurveyDatasetRow out;
    out.dataset = name;
    for (int q = 0; q < 4; ++q) {
      std::vector<double> original, explicit_scores;
      for (const auto* row : rows) {
        double v = row->scores[static_cast<std::size_t>(q)];
        (row->is_explicit ? explicit_scores : original).push_back(v);
      }
      out.questions[static_cast<std::size_t>(q)] =
          makeCell(original, explicit_scores);
    }
    return out;
  };

  std::vector<const SurveyRow*> all;
  for (const auto& [name, rows] : by_dataset) {
    report.rows.push_back(buildRow(name, rows));
    all.insert(all.end(), rows.begin(), rows.end());
  }
  report.rows.push_back(buildRow("Average", all));
  return report;
}

std::string surveyReportToText(const SurveyReport& report) {
  std::ostringstream out;
  out << std::left << std::setw(12) << "Dataset";
  for (const char* q : kSurveyQuestions)
    out << std::setw(9) << (std::string("orig ") + q);
  for (const char* q : kSurveyQuestions)
    out << std::setw(9) << (std::string("expl ") + q);
  out << "\n";
  for (const auto& row : report.rows) {
    out << std::left << std::setw(12) << row.dataset;
    auto emit = [&](double mean, bool significant) {
      std::ostringstream cell;
      cell << std::fixed << std::setprecision(2) << mean
           << (significant ? "*" : "");
      out << std::setw(9) << cell.str();
    };
    for (const auto& cell : row.questions) {
      bool starred = cell.significant && cell.mean_original > cell.mean_explicit;
      emit(cell.mean_original, starred);
    }
    for (const auto& cell : row.questions) {
      bool starred = cell.significant && cell.mean_explicit > cell.mean_original;
      emit(cell.mean_explicit, starred);
    }
    out << '\n';
  }
  out << "* = Mann-Whitney p < 0.05 favoring that notation\n";
  return out.str();
}

std::string surveyReportToJson(const SurveyReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json item;
    item["dataset"] = row.dataset;
    for (int q = 0; q < 4; ++q) {
      const SurveyCell& cell = row.questions[static_cast<std::size_t>(q)];
      nlohmann::json c;
      c["mean_original"] = cell.mean_original;
      c["mean_explicit"] = cell.mean_explicit;
      c["n_original"] = cell.n_original;
      c["n_explicit"] = cell.n_explicit;
      if (cell.p_value)
        c["p_value"] = *cell.p_value;
      else
        c["p_value"] = nullptr;
      c["significant"] = cell.significant;
      item[kSurveyQuestions[static_cast<std::size_t>(q)]] = c;
    }
    rows.push_back(item);
  }
  return rows.dump(2) + "\n";
}

std::string surveyReportToCsv(const SurveyReport& report) {
  std::ostringstream out;
  out << "dataset,question,mean_original,mean_explicit,n_original,"
         "n_explicit,p_value,significant\n";
  out.precision(9);
  for (const auto& row : report.rows) {
    for (int q = 0; q < 4; ++q) {
      const SurveyCell& cell = row.questions[static_cast<std::size_t>(q)];
      out << row.dataset << ',' << kSurveyQuestions[static_cast<std::size_t>(q)]
          << ',' << cell.mean_original << ',' << cell.mean_explicit << ','
          << cell.n_original << ',' << cell.n_explicit << ',';
      if (cell.p_value) out << *cell.p_value;
      out << ',' << (cell.significant ? 1 : 0) << '\n';
    }
  }
  return out.str();
}

}  // namespace structok::stats
