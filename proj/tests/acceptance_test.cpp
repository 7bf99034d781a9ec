// Acceptance suite: one test per acceptance criterion, each printing a
// PASS/FAIL line. Criteria are property-based plus direction checks; the
// paper-scale numbers need real corpora and trained transformers and are
// out of scope by design.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "structok/error.h"
#include "structok/experiment.h"
#include "structok/mini_corpus.h"
#include "structok/scape.h"
#include "structok/util.h"
#include "test_support/oracles.h"
#include "test_support/random_fixtures.h"

namespace structok {
namespace {

namespace fs = std::filesystem;

void printCriterion(int number, const char* name) {
  std::printf("[CRITERION %2d] %-58s %s\n", number, name,
              ::testing::Test::HasFailure() ? "FAIL" : "PASS");
  std::fflush(stdout);
}

double elapsedSeconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

// Shared mini corpus, written once.
class Acceptance : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    corpus_dir_ = new fs::path(fs::temp_directory_path() /
                               "structok_acceptance_corpus");
    fs::remove_all(*corpus_dir_);
    manifest_ = new DatasetManifest(loadManifest(writeMiniCorpus(*corpus_dir_)));
  }
  static void TearDownTestSuite() {
    fs::remove_all(*corpus_dir_);
    delete manifest_;
    delete corpus_dir_;
    manifest_ = nullptr;
    corpus_dir_ = nullptr;
  }

  static fs::path* corpus_dir_;
  static DatasetManifest* manifest_;
};

fs::path* Acceptance::corpus_dir_ = nullptr;
DatasetManifest* Acceptance::manifest_ = nullptr;

std::vector<tokenizer::TokenSequence> tokenizeSplit(
    const DatasetManifest& manifest, Split split,
    tokenizer::RepresentationKind kind) {
  std::vector<tokenizer::TokenSequence> seqs;
  for (const auto& path : manifest.pathsFor(split))
    seqs.push_back(tokenizer::encode(
        smf::extractNotes(smf::parseSmfFile(path)), kind,
        path.generic_string()));
  return seqs;
}

// ---------------------------------------------------------------------------
// 1. SMF round-trip
// ---------------------------------------------------------------------------

TEST_F(Acceptance, Criterion01_SmfRoundTrip) {
  auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(0xACC1);
  for (int trial = 0; trial < 100; ++trial) {
    auto doc = testing::randomMidiDocument(rng, 500);
    auto direct = smf::extractNotes(doc);
    auto round = smf::extractNotes(smf::parseSmf(smf::writeSmf(doc)));
    ASSERT_EQ(round.notes.size(), direct.notes.size()) << "trial " << trial;
    for (std::size_t i = 0; i < direct.notes.size(); ++i)
      ASSERT_EQ(round.notes[i], direct.notes[i]) << "trial " << trial;
    ASSERT_EQ(round.warnings, direct.warnings);
    ASSERT_DOUBLE_EQ(round.total_duration_s, direct.total_duration_s);
  }
  EXPECT_LT(elapsedSeconds(start), 5.0);
  printCriterion(1, "SMF write->parse->extract round trip, < 5 s");
}

// ---------------------------------------------------------------------------
// 2. Tokenizer round trip and quantization bound
// ---------------------------------------------------------------------------

TEST_F(Acceptance, Criterion02_TokenizerRoundTrip) {
  using tokenizer::RepresentationKind;
  std::mt19937_64 rng(0xACC2);
  for (int trial = 0; trial < 1000; ++trial) {
    auto notes = testing::randomGridNoteList(rng, 30);
    for (auto kind :
         {RepresentationKind::OnOff, RepresentationKind::ExplicitDuration}) {
      auto decoded = tokenizer::decode(tokenizer::encode(notes, kind));
      ASSERT_EQ(decoded.notes.notes.size(), notes.notes.size())
          << "trial " << trial;
      for (std::size_t i = 0; i < notes.notes.size(); ++i)
        ASSERT_EQ(decoded.notes.notes[i], notes.notes[i]) << "trial " << trial;
    }
  }
  for (int trial = 0; trial < 300; ++trial) {
    auto notes = testing::randomFreeNoteList(rng, 30);
    for (auto kind :
         {RepresentationKind::OnOff, RepresentationKind::ExplicitDuration}) {
      auto decoded = tokenizer::decode(tokenizer::encode(notes, kind));
      ASSERT_EQ(decoded.notes.notes.size(), notes.notes.size());
      std::map<std::pair<int64_t, int>, smf::Note> by_key;
      for (const auto& note : decoded.notes.notes)
        by_key.emplace(
            std::make_pair(
                static_cast<int64_t>(std::llround(note.onset_s / 0.01)),
                static_cast<int>(note.pitch)),
            note);
      std::multiset<int> pitches_in, pitches_out;
      for (const auto& note : notes.notes) {
        auto it = by_key.find(std::make_pair(
            static_cast<int64_t>(std::llround(note.onset_s / 0.01)),
            static_cast<int>(note.pitch)));
        ASSERT_NE(it, by_key.end());
        ASSERT_LE(std::abs(note.onset_s - it->second.onset_s), 0.005 + 1e-12);
        double half_bin = note.duration_s <= 1.005 ? 0.005 : 0.05;
        ASSERT_LE(std::abs(note.duration_s - it->second.duration_s),
                  half_bin + 1e-12);
        pitches_in.insert(note.pitch);
      }
      for (const auto& note : decoded.notes.notes)
        pitches_out.insert(note.pitch);
      ASSERT_EQ(pitches_in, pitches_out);
    }
  }
  printCriterion(2, "grid round trip exact; off-grid error bounds hold");
}

// ---------------------------------------------------------------------------
// 3. Length direction
// ---------------------------------------------------------------------------

TEST_F(Acceptance, Criterion03_LengthDirection) {
  auto table = buildCorpusStatsTable(*manifest_, 0);
  ASSERT_EQ(table.per_kind.size(), 2u);
  double onoff = table.per_kind[0].mean_length;
  double explicit_len = table.per_kind[1].mean_length;
  EXPECT_LT(explicit_len, onoff);
  printCriterion(3, "mean explicit token length < mean onoff length");
}

// ---------------------------------------------------------------------------
// 4. Entropy
// ---------------------------------------------------------------------------

TEST_F(Acceptance, Criterion04_Entropy) {
  metrics::PitchClassHistogram uniform;
  uniform.p.fill(1.0 / 12);
  EXPECT_NEAR(metrics::pitchClassEntropy(uniform), 3.58496, 1e-5);
  EXPECT_NEAR(metrics::pitchClassEntropy(uniform), std::log2(12.0), 1e-6);

  metrics::PitchClassHistogram delta;
  delta.p[4] = 1.0;
  EXPECT_DOUBLE_EQ(metrics::pitchClassEntropy(delta), 0.0);

  std::mt19937_64 rng(0xACC4);
  for (int trial = 0; trial < 100; ++trial) {
    metrics::PitchClassHistogram hist;
    double total = 0.0;
    for (auto& v : hist.p) {
      v = static_cast<double>(rng() % 1000 + 1);
      total += v;
    }
    for (auto& v : hist.p) v /= total;
    double reference = metrics::pitchClassEntropy(hist);
    auto shuffled = hist;
    for (std::size_t i = 11; i > 0; --i)
      std::swap(shuffled.p[i], shuffled.p[rng() % (i + 1)]);
    EXPECT_NEAR(metrics::pitchClassEntropy(shuffled), reference, 1e-9);
  }
  printCriterion(4, "entropy: log2(12) max, delta zero, permutation inv.");
}

// ---------------------------------------------------------------------------
// 5. Consistency
// ---------------------------------------------------------------------------

TEST_F(Acceptance, Criterion05_Consistency) {
  // Identical windows.
  smf::NoteList identical;
  for (int w = 0; w < 10; ++w) {
    smf::Note note;
    note.onset_s = w * 1.0;
    note.duration_s = 0.5;
    note.pitch = 60;
    note.velocity = 80;
    identical.notes.push_back(note);
  }
  identical.total_duration_s = 10.0;
  EXPECT_LE(metrics::pitchClassConsistency(identical, 10), 1e-9);

  std::mt19937_64 rng(0xACC5);
  int checked = 0;
  while (checked < 50) {
    auto notes = testing::randomFreeNoteList(rng, 80);
    try {
      double value = metrics::pitchClassConsistency(notes, 10);
      EXPECT_NEAR(value, testing::consistencyOracle(notes, 10), 1e-9);
      ++checked;
    } catch (const Error&) {
      // too sparse; draw another piece
    }
  }
  printCriterion(5, "consistency: zero on identical windows, oracle match");
}

// ---------------------------------------------------------------------------
// 6. SSM / scape plot structureness
// ---------------------------------------------------------------------------

TEST_F(Acceptance, Criterion06_Structureness) {
  // Band bounds are the paper's {3, 8, 15} seconds.
  metrics::MetricParams defaults;
  EXPECT_DOUBLE_EQ(defaults.si_short_low_s, 3.0);
  EXPECT_DOUBLE_EQ(defaults.si_mid_low_s, 8.0);
  EXPECT_DOUBLE_EQ(defaults.si_long_low_s, 15.0);

  auto repeat = testing::repeatFixture(20.0);
  auto siLong = [](const smf::NoteList& notes) {
    auto enhanced =
        metrics::enhanceSsm(metrics::computeSsm(metrics::chromagram(notes, 10.0)));
    auto plot = metrics::fitnessScapePlot(enhanced);
    return metrics::structurenessIndicator(
        plot, 15.0, std::numeric_limits<double>::infinity());
  };
  double si_repeat = siLong(repeat);
  EXPECT_GE(si_repeat, 0.5);
  EXPECT_LE(si_repeat, 1.0);

  int wins = 0;
  for (int trial = 0; trial < 20; ++trial) {
    auto shuffled = testing::shuffledPitches(repeat, 0xACC6 + trial);
    double si_shuffled = siLong(shuffled);
    EXPECT_GE(si_shuffled, 0.0);
    EXPECT_LE(si_shuffled, 1.0);
    if (si_repeat > si_shuffled) ++wins;
  }
  EXPECT_EQ(wins, 20);
  printCriterion(6, "SI_long >= 0.5 on repeat; beats 20/20 pitch shuffles");
}

// ---------------------------------------------------------------------------
// 7. Path-family DP vs exhaustive enumeration
// ---------------------------------------------------------------------------

TEST_F(Acceptance, Criterion07_PathFamilyExhaustive) {
  using Rows = std::vector<std::vector<double>>;
  std::vector<Rows> fixtures;
  // Identity, ideal repeat, block and dyadic random matrices up to 6x6.
  for (int n : {4, 5, 6}) {
    Rows identity(n, std::vector<double>(n, -2.0));
    for (int i = 0; i < n; ++i) identity[i][i] = 1.0;
    fixtures.push_back(identity);
  }
  {
    Rows repeat(6, std::vector<double>(6, -2.0));
    for (int i = 0; i < 6; ++i) repeat[i][i] = 1.0;
    for (int i = 0; i + 3 < 6; ++i) repeat[i][i + 3] = repeat[i + 3][i] = 1.0;
    fixtures.push_back(repeat);
  }
  std::mt19937_64 rng(0xACC7);
  for (int m = 0; m < 8; ++m) {
    int n = 4 + static_cast<int>(rng() % 3);
    Rows rows(n, std::vector<double>(n, 0.0));
    for (auto& row : rows)
      for (auto& v : row)
        v = static_cast<double>(static_cast<int>(rng() % 25) - 16) / 8.0;
    fixtures.push_back(rows);
  }

  for (const auto& rows : fixtures) {
    auto ssm = testing::ssmFromRows(rows);
    for (int a = 0; a < ssm.n; ++a) {
      for (int b = a; b < ssm.n; ++b) {
        auto dp = metrics::pathFamilyScore(ssm, a, b);
        auto oracle = testing::exhaustivePathFamily(rows, a, b);
        ASSERT_EQ(dp.score, oracle.score) << "[" << a << "," << b << "]";
        ASSERT_EQ(dp.coverage, oracle.coverage) << "[" << a << "," << b << "]";
      }
    }
  }
  printCriterion(7, "path-family DP equals exhaustive enumeration");
}

// ---------------------------------------------------------------------------
// 8. COSIATEC
// ---------------------------------------------------------------------------

TEST_F(Acceptance, Criterion08_Cosiatec) {
  std::mt19937_64 rng(0xACC8);
  int compared = 0;
  while (compared < 200) {
    metrics::PointSet points;
    int n = 2 + static_cast<int>(rng() % 7);  // 2..8 points
    for (int i = 0; i < n; ++i)
      points.push_back({static_cast<int64_t>(rng() % 10),
                        static_cast<int>(rng() % 10)});
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.size() < 2) continue;
    auto best = metrics::bestTec(points);
    auto oracle = testing::bruteForceBestTecRatio(points);
    ASSERT_EQ(metrics::tecCoveredCount(best) * oracle.size,
              oracle.covered * best.encodingSize())
        << "comparison " << compared;
    ++compared;
  }

  metrics::PointSet example = {{0, 60}, {1, 62}, {2, 64},
                               {10, 60}, {11, 62}, {12, 64}};
  EXPECT_DOUBLE_EQ(metrics::compressionRatio(example), 1.5);

  for (int trial = 0; trial < 1000; ++trial) {
    metrics::PointSet points;
    int n = 1 + static_cast<int>(rng() % 20);
    for (int i = 0; i < n; ++i)
      points.push_back({static_cast<int64_t>(rng() % 15),
                        static_cast<int>(rng() % 15)});
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    ASSERT_GE(metrics::compressionRatio(points), 1.0);
  }
  printCriterion(8, "COSIATEC matches oracle; CR = 1.5 example; CR >= 1");
}

// ---------------------------------------------------------------------------
// 9. BCa bootstrap
// ---------------------------------------------------------------------------

TEST_F(Acceptance, Criterion09_BcaBootstrap) {
  // Default resample count is the paper's 9999.
  stats::IntervalEstimate defaults;
  EXPECT_EQ(defaults.resamples, 9999);
  EXPECT_EQ(stats::kDefaultResamples, 9999);

  auto degenerate = stats::bootstrapBcaMean({{2.5, 2.5, 2.5}, "flat"});
  EXPECT_DOUBLE_EQ(degenerate.low, degenerate.high);

  // Symmetric reduction: with a = 0 and a resample draw whose z0 is exactly
  // zero, BCa endpoints equal the plain percentile endpoints.
  {
    std::vector<double> values = {1.0, 3.0};
    bool found = false;
    for (uint64_t seed = 0; seed < 200 && !found; ++seed) {
      std::vector<double> boot;
      for (int block = 0; block * 512 < 9999; ++block) {
        std::mt19937_64 rng(derivedSeed(seed, 1, static_cast<uint64_t>(block)));
        for (int b = block * 512; b < std::min(9999, (block + 1) * 512); ++b) {
          double sum = 0.0;
          for (int i = 0; i < 2; ++i) sum += values[rng() % 2];
          boot.push_back(sum / 2.0);
        }
      }
      std::sort(boot.begin(), boot.end());
      double below = 0.0;
      for (double v : boot) {
        if (v < 2.0) below += 1.0;
        if (v == 2.0) below += 0.5;
      }
      if (below != 9999.0 / 2.0) continue;
      found = true;
      auto estimate = stats::bootstrapBcaMean({values, "pair"}, 0.95, 9999, seed);
      EXPECT_DOUBLE_EQ(estimate.low,
                       boot[static_cast<std::size_t>(std::ceil(0.025 * 9999)) - 1]);
      EXPECT_DOUBLE_EQ(estimate.high,
                       boot[static_cast<std::size_t>(std::ceil(0.975 * 9999)) - 1]);
    }
    EXPECT_TRUE(found);
  }

  // Coverage over 1000 seeded size-30 standard-normal samples.
  int covered = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::mt19937_64 rng(derivedSeed(0xACC9, 6, static_cast<uint64_t>(trial)));
    auto uniform = [&rng] {
      return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    };
    std::vector<double> values;
    while (values.size() < 30) {
      double u1 = uniform(), u2 = uniform();
      double r = std::sqrt(-2.0 * std::log(u1));
      values.push_back(r * std::cos(2.0 * M_PI * u2));
      if (values.size() < 30) values.push_back(r * std::sin(2.0 * M_PI * u2));
    }
    auto ci = stats::bootstrapBcaMean({values, "normal"}, 0.95, 9999,
                                      derivedSeed(0xACC9, 7, trial));
    if (ci.low <= 0.0 && 0.0 <= ci.high) ++covered;
  }
  EXPECT_GE(covered, 920);
  EXPECT_LE(covered, 980);
  printCriterion(9, "BCa: degenerate, percentile reduction, 92-98% coverage");
}

// ---------------------------------------------------------------------------
// 10. Mann-Whitney
// ---------------------------------------------------------------------------

TEST_F(Acceptance, Criterion10_MannWhitney) {
  auto exact = stats::mannWhitneyU({{1, 2, 3}, "a"}, {{4, 5, 6}, "b"});
  EXPECT_DOUBLE_EQ(exact.p_value, 0.1);
  EXPECT_DOUBLE_EQ(exact.u_statistic, 0.0);

  for (int trial = 0; trial < 20; ++trial) {
    std::mt19937_64 rng(1300 + static_cast<uint64_t>(trial) * 7);
    std::vector<double> a, b;
    int n1 = 30 + static_cast<int>(rng() % 10);
    int n2 = 30 + static_cast<int>(rng() % 10);
    for (int i = 0; i < n1; ++i)
      a.push_back(std::min<double>(5.0, 1.0 + rng() % 3 + rng() % 3));
    for (int i = 0; i < n2; ++i)
      b.push_back(std::min<double>(
          5.0, 1.0 + rng() % 3 + rng() % 3 + (rng() % 4 == 0 ? 1 : 0)));
    auto result = stats::mannWhitneyU({a, "a"}, {b, "b"});
    double p_perm = testing::permutationTestP(a, b, 100000, 999 + trial);
    EXPECT_NEAR(result.p_value, p_perm, 0.01) << "fixture " << trial;
  }

  std::mt19937_64 rng(0xACCA);
  for (int trial = 0; trial < 200; ++trial) {
    stats::Sample a, b;
    int n1 = 1 + static_cast<int>(rng() % 15);
    int n2 = 1 + static_cast<int>(rng() % 15);
    for (int i = 0; i < n1; ++i)
      a.values.push_back(static_cast<double>(rng() % 8));
    for (int i = 0; i < n2; ++i)
      b.values.push_back(static_cast<double>(rng() % 8));
    auto ab = stats::mannWhitneyU(a, b);
    auto ba = stats::mannWhitneyU(b, a);
    ASSERT_DOUBLE_EQ(ab.u_statistic + ba.u_statistic,
                     static_cast<double>(n1) * n2);
  }
  printCriterion(10, "Mann-Whitney: exact p, oracle agreement, U sum");
}

// ---------------------------------------------------------------------------
// 11. Harness
// ---------------------------------------------------------------------------

TEST_F(Acceptance, Criterion11_Harness) {
  using tokenizer::RepresentationKind;
  for (auto kind :
       {RepresentationKind::OnOff, RepresentationKind::ExplicitDuration}) {
    auto train = tokenizeSplit(*manifest_, Split::Train, kind);
    auto test = tokenizeSplit(*manifest_, Split::Test, kind);
    auto model = gen::trainMarkov(train);
    gen::HarnessConfig cfg;  // paper defaults: 256 -> 2048, 3 x 10
    cfg.seed = 0xACCB;
    auto outputs = gen::runHarness(model, test, cfg);
    ASSERT_EQ(outputs.size(), 30u);
    for (const auto& out : outputs) {
      ASSERT_EQ(out.ids.size(), 2048u);
      bool prefix_ok = false;
      for (const auto& piece : test) {
        if (out.source_id.rfind(piece.source_id + "#c", 0) != 0) continue;
        prefix_ok = std::equal(piece.ids.begin(), piece.ids.begin() + 256,
                               out.ids.begin());
      }
      ASSERT_TRUE(prefix_ok) << out.source_id;
    }
    auto rerun = gen::runHarness(model, test, cfg);
    ASSERT_EQ(rerun.size(), outputs.size());
    for (std::size_t i = 0; i < outputs.size(); ++i)
      ASSERT_EQ(rerun[i].ids, outputs[i].ids);
  }
  printCriterion(11, "harness: 30 x 2048 per notation, primer prefix, rerun");
}

// ---------------------------------------------------------------------------
// 12. End-to-end experiment
// ---------------------------------------------------------------------------

TEST_F(Acceptance, Criterion12_EndToEndExperiment) {
  auto out_dir = fs::temp_directory_path() / "structok_acceptance_experiment";
  fs::remove_all(out_dir);
  RunConfig config;  // defaults throughout: 30 pieces x 2048 tokens, B = 9999
  config.seed = 0xACCC;

  auto start = std::chrono::steady_clock::now();
  auto result = runExperiment(*manifest_, config, out_dir);
  double elapsed = elapsedSeconds(start);
  EXPECT_LT(elapsed, 600.0);

  EXPECT_EQ(result.reports_onoff.size(), 30u);
  EXPECT_EQ(result.reports_explicit.size(), 30u);
  ASSERT_EQ(result.comparison.cells.size(), 6u);
  for (const auto& cell : result.comparison.cells) {
    EXPECT_EQ(cell.status, "ok") << cell.metric;
    EXPECT_TRUE(cell.ci_a.has_value()) << cell.metric;
    EXPECT_TRUE(cell.ci_b.has_value()) << cell.metric;
    EXPECT_TRUE(cell.improvement_pct.has_value()) << cell.metric;
    EXPECT_EQ(cell.n_a, 30) << cell.metric;
    EXPECT_EQ(cell.n_b, 30) << cell.metric;
  }
  EXPECT_TRUE(fs::exists(out_dir / "comparison.txt"));
  std::printf("    experiment wall time: %.1f s\n", elapsed);
  fs::remove_all(out_dir);
  printCriterion(12, "end-to-end experiment < 10 min, all cells populated");
}

}  // namespace
}  // namespace structok
