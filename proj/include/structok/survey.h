// Listening-study analysis: Likert-5 survey CSV (dataset, notation, O, I,
// S, R) to per-dataset means and Mann-Whitney significance per question.

#ifndef STRUCTOK_SURVEY_H_
#define STRUCTOK_SURVEY_H_

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace structok::stats {

inline constexpr std::array<const char*, 4> kSurveyQuestions = {"O", "I", "S",
                                                                "R"};

struct SurveyRow {
  std::string dataset;
  bool is_explicit = false;
  std::array<double, 4> scores{};  // O, I, S, R
};

struct SurveyData {
  std::vector<SurveyRow> rows;
  std::vector<std::string> errors;  // malformed lines, with line numbers
};

SurveyData parseSurveyCsv(const std::string& text);

struct SurveyCell {
  double mean_original = 0.0;
  double mean_explicit = 0.0;
  int n_original = 0;
  int n_explicit = 0;
  std::optional<double> p_value;  // empty when either group has < 2 rows
  bool significant = false;
};

struct SurveyDatasetRow {
  std::string dataset;  // "Average" for the pooled row
  std::array<SurveyCell, 4> questions;
};

struct SurveyReport {
  std::vector<SurveyDatasetRow> rows;  // per dataset plus trailing pooled row
};

SurveyReport analyzeSurvey(const SurveyData& data);

std::string surveyReportToText(const SurveyReport& report);
std::string surveyReportToJson(const SurveyReport& report);
std::string surveyReportToCsv(const SurveyReport& report);

}  // namespace structok::stats

#endif  // STRUCTOK_SURVEY_H_
