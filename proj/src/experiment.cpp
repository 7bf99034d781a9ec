#include "structok/experiment.h"

#include <chrono>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "structok/error.h"
#include "structok/token_io.h"
#include "structok/util.h"

namespace structok {

namespace {

using nlohmann::json;
using tokenizer::RepresentationKind;

constexpr RepresentationKind kKinds[] = {RepresentationKind::OnOff,
                                         RepresentationKind::ExplicitDuration};

struct StageTimer {
  std::ostream* log;
  std::ostringstream file_log;

  void note(const std::string& stage, double seconds) {
    std::ostringstream line;
    line << stage << ": " << seconds << " s\n";
    file_log << line.str();
    if (log) *log << line.str();
  }
};

double secondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

// Tokenizes the given files in parallel; unreadable files are skipped and
// reported in `failures` as "path: reason".
std::vector<tokenizer::TokenSequence> tokenizeFiles(
    const std::vector<std::filesystem::path>& paths, RepresentationKind kind,
    int workers, std::vector<std::string>* failures) {
  std::vector<tokenizer::TokenSequence> seqs(paths.size());
  std::vector<std::string> errors(paths.size());
  parallelFor(paths.size(), workers, [&](std::size_t i) {
    try {
      auto notes = smf::extractNotes(smf::parseSmfFile(paths[i]));
      seqs[i] = tokenizer::encode(notes, kind, paths[i].generic_string());
    } catch (const std::exception& e) {
      errors[i] = paths[i].generic_string() + ": " + e.what();
    }
  });
  std::vector<tokenizer::TokenSequence> ok;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (errors[i].empty())
      ok.push_back(std::move(seqs[i]));
    else if (failures)
      failures->push_back(errors[i]);
  }
  return ok;
}

json enhanceToJson(const metrics::EnhanceParams& p) {
  return {{"smooth_s", p.smooth_s},
          {"keep_fraction", p.keep_fraction},
          {"penalty", p.penalty}};
}

}  // namespace

std::string runConfigToJson(const RunConfig& config) {
  json doc;
  doc["seed"] = config.seed;
  doc["workers"] = config.workers;
  doc["markov"] = {{"order", config.markov_order},
                   {"alpha", config.markov_alpha}};
  doc["bootstrap"] = {{"level", config.bootstrap_level},
                      {"resamples", config.bootstrap_resamples}};
  doc["harness"] = {
      {"primer_len", config.harness.primer_len},
      {"total_len", config.harness.total_len},
      {"continuations_per_primer", config.harness.continuations_per_primer},
      {"primers_per_dataset", config.harness.primers_per_dataset},
      {"temperature", config.harness.temperature},
      {"argmax", config.harness.argmax}};
  const auto& m = config.metric_params;
  doc["metrics"] = {{"frame_rate", m.frame_rate},
                    {"consistency_windows", m.consistency_windows},
                    {"enhance", enhanceToJson(m.enhance)},
                    {"si_bands_s", {m.si_short_low_s, m.si_mid_low_s, m.si_long_low_s}},
                    {"cr_grid_s", m.cr_grid_s},
                    {"scape_exact", m.scape_exact},
                    {"scape_work_budget", m.scape_work_budget}};
  return doc.dump(2) + "\n";
}

RunConfig runConfigFromJson(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedInput, e.what());
  }
  RunConfig config;
  config.seed = doc.value("seed", config.seed);
  config.workers = doc.value("workers", config.workers);
  if (doc.contains("markov")) {
    config.markov_order = doc["markov"].value("order", config.markov_order);
    config.markov_alpha = doc["markov"].value("alpha", config.markov_alpha);
  }
  if (doc.contains("bootstrap")) {
    config.bootstrap_level =
        doc["bootstrap"].value("level", config.bootstrap_level);
    config.bootstrap_resamples =
        doc["bootstrap"].value("resamples", config.bootstrap_resamples);
  }
  if (doc.contains("harness")) {
    const auto& h = doc["harness"];
    config.harness.primer_len = h.value("primer_len", config.harness.primer_len);
    config.harness.total_len = h.value("total_len", config.harness.total_len);
    config.harness.continuations_per_primer = h.value(
        "continuations_per_primer", config.harness.continuations_per_primer);
    config.harness.primers_per_dataset =
        h.value("primers_per_dataset", config.harness.primers_per_dataset);
    config.harness.temperature =
        h.value("temperature", config.harness.temperature);
    config.harness.argmax = h.value("argmax", config.harness.argmax);
  }
  if (doc.contains("metrics")) {
    const auto& m = doc["metrics"];
    auto& p = config.metric_params;
    p.frame_rate = m.value("frame_rate", p.frame_rate);
    p.consistency_windows =
        m.value("consistency_windows", p.consistency_windows);
    if (m.contains("enhance")) {
      p.enhance.smooth_s = m["enhance"].value("smooth_s", p.enhance.smooth_s);
      p.enhance.keep_fraction =
          m["enhance"].value("keep_fraction", p.enhance.keep_fraction);
      p.enhance.penalty = m["enhance"].value("penalty", p.enhance.penalty);
    }
    if (m.contains("si_bands_s")) {
      auto bands = m["si_bands_s"];
      p.si_short_low_s = bands.at(0).get<double>();
      p.si_mid_low_s = bands.at(1).get<double>();
      p.si_long_low_s = bands.at(2).get<double>();
    }
    p.cr_grid_s = m.value("cr_grid_s", p.cr_grid_s);
    p.scape_exact = m.value("scape_exact", p.scape_exact);
    p.scape_work_budget = m.value("scape_work_budget", p.scape_work_budget);
  }
  return config;
}

ExperimentResult runExperiment(const DatasetManifest& manifest,
                               const RunConfig& config,
                               const std::filesystem::path& out_dir,
                               std::ostream* log) {
  auto train_paths = manifest.pathsFor(Split::Train);
  auto test_paths = manifest.pathsFor(Split::Test);
  if (train_paths.empty())
    throw Error(ErrorCode::EmptyCorpus, "experiment: manifest has no train split");
  if (test_paths.empty())
    throw Error(ErrorCode::EmptyCorpus, "experiment: manifest has no test split");

  std::filesystem::create_directories(out_dir);
  std::filesystem::create_directories(out_dir / "models");
  writeTextFile(out_dir / "run_config.json", runConfigToJson(config));

  StageTimer timer{log, {}};
  ExperimentResult result;
  result.out_dir = out_dir;

  for (RepresentationKind kind : kKinds) {
    const std::string kind_name = tokenizer::kindName(kind);
    auto stage_start = std::chrono::steady_clock::now();

    std::vector<std::string> failures;
    auto train_seqs =
        tokenizeFiles(train_paths, kind, config.workers, &failures);
    auto test_seqs = tokenizeFiles(test_paths, kind, config.workers, &failures);
    for (const auto& failure : failures)
      timer.note("experiment/tokenize[" + kind_name + "] skipped " + failure,
                 0.0);
    if (train_seqs.empty())
      throw Error(ErrorCode::EmptyCorpus,
                  "experiment/tokenize[" + kind_name +
                      "]: no readable train files");
    timer.note("experiment/tokenize[" + kind_name + "]",
               secondsSince(stage_start));

    stage_start = std::chrono::steady_clock::now();
    gen::MarkovModel model =
        gen::trainMarkov(train_seqs, config.markov_order, config.markov_alpha);
    model.save(out_dir / "models" / (kind_name + ".smkv"));
    timer.note("experiment/train[" + kind_name + "]", secondsSince(stage_start));

    stage_start = std::chrono::steady_clock::now();
    gen::HarnessConfig harness = config.harness;
    harness.seed = derivedSeed(config.seed, 10);
    std::vector<tokenizer::TokenSequence> generated;
    try {
      generated = gen::runHarness(model, test_seqs, harness);
    } catch (const Error& e) {
      throw Error(e.code(),
                  "experiment/generate[" + kind_name + "]: " + e.what());
    }
    auto generated_dir = out_dir / "generated" / kind_name;
    auto decoded_dir = out_dir / "decoded" / kind_name;
    std::filesystem::create_directories(generated_dir);
    std::filesystem::create_directories(decoded_dir);
    json index = json::array();
    for (std::size_t i = 0; i < generated.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "gen_%03zu", i);
      tokenizer::writeTokenBinaryFile(generated[i],
                                      generated_dir / (std::string(name) + ".stok"));
      index.push_back({{"file", std::string(name) + ".stok"},
                       {"source", generated[i].source_id}});
    }
    writeTextFile(generated_dir / "index.json", index.dump(2) + "\n");
    timer.note("experiment/generate[" + kind_name + "]",
               secondsSince(stage_start));

    stage_start = std::chrono::steady_clock::now();
    std::vector<metrics::MetricReport> reports(generated.size());
    metrics::MetricParams piece_params = config.metric_params;
    piece_params.workers = 1;  // parallelism lives at the piece level here
    parallelFor(generated.size(), config.workers, [&](std::size_t i) {
      auto decoded = tokenizer::decode(generated[i]);
      char name[32];
      std::snprintf(name, sizeof(name), "gen_%03zu", i);
      smf::writeSmfFile(smf::notesToDocument(decoded.notes),
                        decoded_dir / (std::string(name) + ".mid"));
      reports[i] = metrics::computeMetricReport(decoded.notes,
                                                generated[i].source_id,
                                                piece_params);
    });
    std::filesystem::create_directories(out_dir / "metrics");
    writeTextFile(out_dir / "metrics" / (kind_name + ".json"),
                  report::metricReportsToJson(reports));
    writeTextFile(out_dir / "metrics" / (kind_name + ".csv"),
                  report::metricReportsToCsv(reports));
    timer.note("experiment/metrics[" + kind_name + "]",
               secondsSince(stage_start));

    if (kind == RepresentationKind::OnOff)
      result.reports_onoff = std::move(reports);
    else
      result.reports_explicit = std::move(reports);
  }

  auto stage_start = std::chrono::steady_clock::now();
  stats::CompareConfig compare_config;
  compare_config.level = config.bootstrap_level;
  compare_config.resamples = config.bootstrap_resamples;
  compare_config.seed = derivedSeed(config.seed, 20);
  result.comparison = stats::compareSets(result.reports_onoff,
                                         result.reports_explicit,
                                         compare_config);
  writeTextFile(out_dir / "comparison.json",
                report::comparisonToJson(result.comparison));
  writeTextFile(out_dir / "comparison.csv",
                report::comparisonToCsv(result.comparison));
  writeTextFile(out_dir / "comparison.txt",
                report::comparisonToText(result.comparison));
  timer.note("experiment/compare", secondsSince(stage_start));

  writeTextFile(out_dir / "run_log.txt", timer.file_log.str());
  return result;
}

report::CorpusStatsTable buildCorpusStatsTable(const DatasetManifest& manifest,
                                               int workers) {
  report::CorpusStatsTable table;
  table.dataset = manifest.name;

  std::vector<std::filesystem::path> paths;
  paths.reserve(manifest.entries.size());
  for (const auto& entry : manifest.entries) paths.push_back(entry.path);

  std::vector<smf::NoteList> note_lists(paths.size());
  std::vector<std::string> errors(paths.size());
  parallelFor(paths.size(), workers, [&](std::size_t i) {
    try {
      note_lists[i] = smf::extractNotes(smf::parseSmfFile(paths[i]));
    } catch (const std::exception& e) {
      errors[i] = paths[i].generic_string() + ": " + e.what();
    }
  });

  std::vector<std::size_t> readable;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (errors[i].empty()) {
      readable.push_back(i);
      switch (manifest.entries[i].split) {
        case Split::Train: ++table.counts.train; break;
        case Split::Validation: ++table.counts.validation; break;
        case Split::Test: ++table.counts.test; break;
      }
    } else {
      table.missing_files.push_back(errors[i]);
    }
  }
  table.counts.total = static_cast<int>(readable.size());
  if (readable.empty())
    throw Error(ErrorCode::EmptyCorpus, "no readable files in manifest");

  for (RepresentationKind kind : kKinds) {
    std::vector<tokenizer::TokenSequence> seqs(readable.size());
    parallelFor(readable.size(), workers, [&](std::size_t i) {
      seqs[i] = tokenizer::encode(note_lists[readable[i]], kind,
                                  paths[readable[i]].generic_string());
    });
    table.per_kind.push_back(tokenizer::corpusStats(seqs));
  }
  return table;
}

}  // namespace structok
