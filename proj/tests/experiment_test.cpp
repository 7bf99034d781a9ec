// Tests for the mini corpus, corpus statistics table, run config and the
// end-to-end experiment runner.

#include "structok/experiment.h"

#include <filesystem>

#include <gtest/gtest.h>

#include "structok/error.h"
#include "structok/mini_corpus.h"
#include "structok/util.h"

namespace structok {
namespace {

namespace fs = std::filesystem;

class ExperimentTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / "structok_experiment_test";
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
};

TEST_F(ExperimentTest, MiniCorpusIsDeterministic) {
  auto manifest_a = writeMiniCorpus(dir_ / "a");
  auto manifest_b = writeMiniCorpus(dir_ / "b");
  auto manifest = loadManifest(manifest_a);
  EXPECT_EQ(manifest.entries.size(), 30u);
  EXPECT_EQ(manifest.pathsFor(Split::Train).size(),
            static_cast<std::size_t>(kMiniCorpusTrainFiles));
  EXPECT_EQ(manifest.pathsFor(Split::Test).size(),
            static_cast<std::size_t>(kMiniCorpusTestFiles));
  for (int i = 0; i < 30; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "mini_%03d.mid", i);
    EXPECT_EQ(readBinaryFile(dir_ / "a" / name), readBinaryFile(dir_ / "b" / name))
        << name;
  }
  EXPECT_EQ(readTextFile(manifest_a), readTextFile(manifest_b));
}

TEST_F(ExperimentTest, CorpusStatsDirectionMatchesPaper) {
  auto manifest = loadManifest(writeMiniCorpus(dir_ / "corpus"));
  auto table = buildCorpusStatsTable(manifest, 2);
  EXPECT_EQ(table.counts.total, 30);
  EXPECT_EQ(table.counts.train, 16);
  EXPECT_EQ(table.counts.validation, 4);
  EXPECT_EQ(table.counts.test, 10);
  ASSERT_EQ(table.per_kind.size(), 2u);
  const auto& onoff = table.per_kind[0];
  const auto& explicit_stats = table.per_kind[1];
  EXPECT_EQ(onoff.kind, tokenizer::RepresentationKind::OnOff);
  EXPECT_LT(explicit_stats.mean_length, onoff.mean_length);
  EXPECT_LE(explicit_stats.mean_unique,
            tokenizer::Vocabulary::forKind(explicit_stats.kind).size());
}

TEST_F(ExperimentTest, RunConfigJsonRoundTrip) {
  RunConfig config;
  config.seed = 12345;
  config.workers = 3;
  config.markov_order = 2;
  config.markov_alpha = 0.5;
  config.bootstrap_level = 0.9;
  config.bootstrap_resamples = 999;
  config.harness.primer_len = 128;
  config.harness.total_len = 512;
  config.harness.temperature = 0.7;
  config.metric_params.frame_rate = 5.0;
  config.metric_params.consistency_windows = 8;
  config.metric_params.enhance.smooth_s = 1.0;
  config.metric_params.scape_exact = true;

  auto restored = runConfigFromJson(runConfigToJson(config));
  EXPECT_EQ(restored.seed, config.seed);
  EXPECT_EQ(restored.workers, config.workers);
  EXPECT_EQ(restored.markov_order, config.markov_order);
  EXPECT_DOUBLE_EQ(restored.markov_alpha, config.markov_alpha);
  EXPECT_DOUBLE_EQ(restored.bootstrap_level, config.bootstrap_level);
  EXPECT_EQ(restored.bootstrap_resamples, config.bootstrap_resamples);
  EXPECT_EQ(restored.harness.primer_len, config.harness.primer_len);
  EXPECT_EQ(restored.harness.total_len, config.harness.total_len);
  EXPECT_DOUBLE_EQ(restored.harness.temperature, config.harness.temperature);
  EXPECT_DOUBLE_EQ(restored.metric_params.frame_rate,
                   config.metric_params.frame_rate);
  EXPECT_EQ(restored.metric_params.consistency_windows,
            config.metric_params.consistency_windows);
  EXPECT_DOUBLE_EQ(restored.metric_params.enhance.smooth_s,
                   config.metric_params.enhance.smooth_s);
  EXPECT_TRUE(restored.metric_params.scape_exact);
}

RunConfig tinyConfig() {
  RunConfig config;
  config.seed = 9;
  config.workers = 2;
  config.harness.primer_len = 128;
  config.harness.total_len = 384;
  config.harness.continuations_per_primer = 1;
  config.harness.primers_per_dataset = 2;
  config.bootstrap_resamples = 499;
  config.metric_params.scape_work_budget = 2e8;
  return config;
}

TEST_F(ExperimentTest, SmallRunProducesAllArtifacts) {
  auto manifest = loadManifest(writeMiniCorpus(dir_ / "corpus"));
  auto result = runExperiment(manifest, tinyConfig(), dir_ / "out");

  EXPECT_EQ(result.reports_onoff.size(), 2u);
  EXPECT_EQ(result.reports_explicit.size(), 2u);
  EXPECT_EQ(result.comparison.cells.size(), 6u);

  for (const char* artifact :
       {"run_config.json", "models/onoff.smkv", "models/explicit.smkv",
        "generated/onoff/gen_000.stok", "generated/onoff/index.json",
        "generated/explicit/gen_001.stok", "decoded/onoff/gen_000.mid",
        "decoded/explicit/gen_001.mid", "metrics/onoff.json",
        "metrics/onoff.csv", "metrics/explicit.json", "comparison.json",
        "comparison.csv", "comparison.txt", "run_log.txt"}) {
    EXPECT_TRUE(fs::exists(dir_ / "out" / artifact)) << artifact;
  }

  // Metric reports parse back from disk.
  auto reports = report::metricReportsFromJson(
      readTextFile(dir_ / "out" / "metrics" / "onoff.json"));
  ASSERT_EQ(reports.size(), 2u);
  EXPECT_GT(reports[0].note_count, 0);
}

TEST_F(ExperimentTest, RerunIsByteIdentical) {
  auto manifest = loadManifest(writeMiniCorpus(dir_ / "corpus"));
  runExperiment(manifest, tinyConfig(), dir_ / "out1");
  runExperiment(manifest, tinyConfig(), dir_ / "out2");
  for (const char* artifact :
       {"run_config.json", "comparison.json", "comparison.csv",
        "metrics/onoff.json", "metrics/explicit.json",
        "generated/onoff/gen_000.stok", "generated/explicit/gen_000.stok",
        "decoded/onoff/gen_000.mid"}) {
    EXPECT_EQ(readBinaryFile(dir_ / "out1" / artifact),
              readBinaryFile(dir_ / "out2" / artifact))
        << artifact;
  }
}

TEST_F(ExperimentTest, MissingSplitReported) {
  DatasetManifest manifest;
  manifest.name = "empty";
  try {
    runExperiment(manifest, tinyConfig(), dir_ / "out");
    FAIL() << "expected EmptyCorpus";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyCorpus);
  }
}

}  // namespace
}  // namespace structok
