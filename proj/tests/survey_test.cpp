// Tests for survey CSV parsing and the Likert analysis table.

#include "structok/survey.h"

#include <gtest/gtest.h>

#include "structok/error.h"

namespace structok::stats {
namespace {

const char kHeader[] = "dataset,notation,O,I,S,R\n";

std::string surveyWithShift() {
  // Pop explicit clearly above original; 12 rows per group.
  std::string csv = kHeader;
  for (int i = 0; i < 12; ++i) {
    csv += "Pop,original," + std::to_string(1 + i % 2) + ",2,2,1\n";
    csv += "Pop,explicit," + std::to_string(4 + i % 2) + ",5,4,5\n";
  }
  return csv;
}

TEST(SurveyParseTest, ValidRows) {
  auto data = parseSurveyCsv(std::string(kHeader) +
                             "Jazz,original,3,4,2,5\n"
                             "Jazz,explicit,2,3,4,1\n");
  ASSERT_EQ(data.rows.size(), 2u);
  EXPECT_TRUE(data.errors.empty());
  EXPECT_EQ(data.rows[0].dataset, "Jazz");
  EXPECT_FALSE(data.rows[0].is_explicit);
  EXPECT_TRUE(data.rows[1].is_explicit);
  EXPECT_DOUBLE_EQ(data.rows[0].scores[0], 3.0);
  EXPECT_DOUBLE_EQ(data.rows[1].scores[3], 1.0);
}

TEST(SurveyParseTest, MalformedRowsListedWithLineNumbers) {
  auto data = parseSurveyCsv(std::string(kHeader) +
                             "Jazz,original,3,4,2,5\n"
                             "Jazz,original,9,4,2,5\n"     // out of range
                             "Jazz,sideways,3,4,2,5\n"     // bad notation
                             "Jazz,original,3,4\n"         // short row
                             "Jazz,explicit,1,2,3,4\n");
  EXPECT_EQ(data.rows.size(), 2u);
  ASSERT_EQ(data.errors.size(), 3u);
  EXPECT_NE(data.errors[0].find("line 3"), std::string::npos);
  EXPECT_NE(data.errors[1].find("line 4"), std::string::npos);
  EXPECT_NE(data.errors[2].find("line 5"), std::string::npos);
}

TEST(SurveyParseTest, MissingHeaderRejected) {
  EXPECT_THROW(parseSurveyCsv("Jazz,original,3,4,2,5\n"), Error);
}

TEST(SurveyAnalyzeTest, ShiftedGroupFlaggedSignificant) {
  auto report = analyzeSurvey(parseSurveyCsv(surveyWithShift()));
  ASSERT_EQ(report.rows.size(), 2u);  // Pop + Average
  const auto& pop = report.rows[0];
  EXPECT_EQ(pop.dataset, "Pop");
  for (const auto& cell : pop.questions) {
    EXPECT_EQ(cell.n_original, 12);
    EXPECT_EQ(cell.n_explicit, 12);
    ASSERT_TRUE(cell.p_value.has_value());
    EXPECT_LT(*cell.p_value, 0.05);
    EXPECT_TRUE(cell.significant);
    EXPECT_GT(cell.mean_explicit, cell.mean_original);
  }
  EXPECT_EQ(report.rows.back().dataset, "Average");
}

TEST(SurveyAnalyzeTest, IdenticalGroupsNotSignificant) {
  std::string csv = kHeader;
  for (int i = 0; i < 10; ++i) {
    csv += "SNES,original,3,3,3,3\n";
    csv += "SNES,explicit,3,3,3,3\n";
  }
  auto report = analyzeSurvey(parseSurveyCsv(csv));
  for (const auto& cell : report.rows[0].questions) {
    ASSERT_TRUE(cell.p_value.has_value());
    EXPECT_DOUBLE_EQ(*cell.p_value, 1.0);
    EXPECT_FALSE(cell.significant);
  }
}

TEST(SurveyAnalyzeTest, SingleRowPerGroupSkipsTest) {
  auto report = analyzeSurvey(parseSurveyCsv(std::string(kHeader) +
                                             "Maestro,original,3,4,2,5\n"
                                             "Maestro,explicit,4,4,3,5\n"));
  for (const auto& cell : report.rows[0].questions) {
    EXPECT_FALSE(cell.p_value.has_value());
    EXPECT_FALSE(cell.significant);
    EXPECT_EQ(cell.n_original, 1);
  }
  // Means are still reported.
  EXPECT_DOUBLE_EQ(report.rows[0].questions[0].mean_original, 3.0);
  EXPECT_DOUBLE_EQ(report.rows[0].questions[0].mean_explicit, 4.0);
}

TEST(SurveyReportTest, OutputsContainAllDatasets) {
  std::string csv = surveyWithShift();
  for (int i = 0; i < 4; ++i) {
    csv += "Jazz,original,3,3,3,3\n";
    csv += "Jazz,explicit,3,3,3,3\n";
  }
  auto report = analyzeSurvey(parseSurveyCsv(csv));
  auto text = surveyReportToText(report);
  EXPECT_NE(text.find("Pop"), std::string::npos);
  EXPECT_NE(text.find("Jazz"), std::string::npos);
  EXPECT_NE(text.find("Average"), std::string::npos);
  auto json = surveyReportToJson(report);
  EXPECT_NE(json.find("\"p_value\""), std::string::npos);
  auto csv_out = surveyReportToCsv(report);
  EXPECT_NE(csv_out.find("dataset,question"), std::string::npos);
}

}  // namespace
}  // namespace structok::stats
