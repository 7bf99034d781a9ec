// structok: tokenize MIDI corpora under the onoff / explicit-duration
// notations, generate continuations with a Markov stand-in model, score
// structural metrics, and compare notation sets.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "structok/error.h"
#include "structok/experiment.h"
#include "structok/mini_corpus.h"
#include "structok/scape.h"
#include "structok/survey.h"
#include "structok/token_io.h"
#include "structok/util.h"

namespace {

namespace fs = std::filesystem;
using namespace structok;
using nlohmann::json;
using tokenizer::RepresentationKind;

uint64_t envSeedFallback() {
  const char* env = std::getenv("STRUCTOK_SEED");
  if (!env) return 0;
  return std::strtoull(env, nullptr, 10);
}

RepresentationKind kindFromFlag(const std::string& kind) {
  if (kind == "onoff") return RepresentationKind::OnOff;
  if (kind == "explicit") return RepresentationKind::ExplicitDuration;
  throw Error(ErrorCode::InvalidArgument,
              "--kind must be onoff or explicit, got '" + kind + "'");
}

bool hasMidiExtension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".mid" || ext == ".midi";
}

// Expands files and directories (recursive, .mid/.midi) into a sorted list.
std::vector<fs::path> collectMidiInputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> paths;
  for (const auto& input : inputs) {
    fs::path p(input);
    if (fs::is_directory(p)) {
      for (const auto& entry : fs::recursive_directory_iterator(p))
        if (entry.is_regular_file() && hasMidiExtension(entry.path()))
          paths.push_back(entry.path());
    } else {
      paths.push_back(p);
    }
  }
  std::sort(paths.begin(), paths.end(), [](const fs::path& a, const fs::path& b) {
    return a.generic_string() < b.generic_string();
  });
  return paths;
}

tokenizer::TokenSequence readTokenFile(const fs::path& path) {
  if (path.extension() == ".stok") return tokenizer::readTokenBinaryFile(path);
  return tokenizer::readTokenTextFile(path);
}

int cmdInspect(const std::vector<std::string>& inputs, bool as_json) {
  auto paths = collectMidiInputs(inputs);
  json items = json::array();
  int failures = 0;
  for (const auto& path : paths) {
    try {
      auto doc = smf::parseSmfFile(path);
      auto notes = smf::extractNotes(doc);
      auto tempo_map = smf::buildTempoMap(doc);
      if (as_json) {
        json item;
        item["path"] = path.generic_string();
        item["format"] = doc.format;
        item["ticks_per_quarter"] = doc.ticks_per_quarter;
        item["tracks"] = doc.tracks.size();
        item["tempo_changes"] = tempo_map.points.size();
        item["notes"] = notes.notes.size();
        item["duration_s"] = notes.total_duration_s;
        item["warnings"] = notes.warnings;
        items.push_back(item);
      } else {
        std::cout << path.generic_string() << ": format " << doc.format << ", "
                  << doc.ticks_per_quarter << " ppq, " << doc.tracks.size()
                  << " tracks, " << notes.notes.size() << " notes, "
                  << notes.total_duration_s << " s";
        if (notes.warnings > 0)
          std::cout << " (" << notes.warnings << " warnings)";
        std::cout << '\n';
      }
    } catch (const std::exception& e) {
      ++failures;
      std::cerr << path.generic_string() << ": " << e.what() << '\n';
    }
  }
  if (as_json) std::cout << items.dump(2) << '\n';
  return failures == static_cast<int>(paths.size()) && failures > 0 ? 1 : 0;
}

int cmdTokenize(const std::vector<std::string>& inputs,
                const std::string& kind_flag, const fs::path& out_dir,
                const std::string& format, int workers) {
  RepresentationKind kind = kindFromFlag(kind_flag);
  auto paths = collectMidiInputs(inputs);
  if (paths.empty()) {
    std::cerr << "no MIDI inputs found\n";
    return 1;
  }
  fs::create_directories(out_dir);

  // Pre-assign output names so equal basenames from different directories
  // cannot collide.
  const char* extension = format == "binary" ? ".stok" : ".tokens";
  std::vector<fs::path> out_paths(paths.size());
  std::set<std::string> taken;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    std::string stem = paths[i].stem().string();
    std::string name = stem + extension;
    for (int suffix = 1; !taken.insert(name).second; ++suffix)
      name = stem + "_" + std::to_string(suffix) + extension;
    out_paths[i] = out_dir / name;
  }

  struct Row {
    std::string error;
    std::size_t tokens = 0;
    std::size_t uniques = 0;
    int anomalies = 0;
  };
  std::vector<Row> rows(paths.size());
  parallelFor(paths.size(), workers, [&](std::size_t i) {
    try {
      auto notes = smf::extractNotes(smf::parseSmfFile(paths[i]));
      auto seq = tokenizer::encode(notes, kind, paths[i].generic_string());
      if (format == "binary")
        tokenizer::writeTokenBinaryFile(seq, out_paths[i]);
      else
        tokenizer::writeTokenTextFile(seq, out_paths[i]);
      std::set<uint16_t> unique(seq.ids.begin(), seq.ids.end());
      rows[i] = {"", seq.ids.size(), unique.size(), notes.warnings};
    } catch (const std::exception& e) {
      rows[i].error = e.what();
    }
  });

  json summary;
  summary["config"] = {{"kind", tokenizer::kindName(kind)},
                       {"format", format}};
  json files = json::array();
  int failures = 0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    json item;
    item["path"] = paths[i].generic_string();
    if (rows[i].error.empty()) {
      item["file"] = out_paths[i].filename().generic_string();
      item["tokens"] = rows[i].tokens;
      item["unique"] = rows[i].uniques;
      item["anomalies"] = rows[i].anomalies;
    } else {
      item["error"] = rows[i].error;
      ++failures;
      std::cerr << paths[i].generic_string() << ": " << rows[i].error << '\n';
    }
    files.push_back(item);
  }
  summary["files"] = files;
  writeTextFile(out_dir / "summary.json", summary.dump(2) + "\n");
  return failures == static_cast<int>(paths.size()) ? 1 : 0;
}

int cmdDetokenize(const std::vector<std::string>& inputs,
                  const fs::path& out_dir) {
  fs::create_directories(out_dir);
  int failures = 0;
  for (const auto& input : inputs) {
    fs::path path(input);
    try {
      auto seq = readTokenFile(path);
      auto decoded = tokenizer::decode(seq);
      fs::path out = out_dir / path.filename();
      out.replace_extension(".mid");
      smf::writeSmfFile(smf::notesToDocument(decoded.notes), out);
      if (decoded.anomalies > 0)
        std::cerr << path.generic_string() << ": " << decoded.anomalies
                  << " anomalies repaired\n";
    } catch (const std::exception& e) {
      ++failures;
      std::cerr << path.generic_string() << ": " << e.what() << '\n';
    }
  }
  return failures == static_cast<int>(inputs.size()) && failures > 0 ? 1 : 0;
}

int cmdStats(const fs::path& manifest_path, const fs::path& out_path,
             int workers) {
  auto manifest = loadManifest(manifest_path);
  auto table = buildCorpusStatsTable(manifest, workers);
  std::cout << report::corpusStatsToText(table);
  if (!out_path.empty())
    writeTextFile(out_path, report::corpusStatsToJson(table));
  return 0;
}

int cmdTrain(const fs::path& manifest_path, const std::string& kind_flag,
             const fs::path& out_path, int order, double alpha, int workers) {
  RepresentationKind kind = kindFromFlag(kind_flag);
  auto manifest = loadManifest(manifest_path);
  auto train_paths = manifest.pathsFor(Split::Train);
  if (train_paths.empty()) {
    std::cerr << "manifest has no train split\n";
    return 1;
  }
  std::vector<tokenizer::TokenSequence> seqs(train_paths.size());
  std::vector<std::string> errors(train_paths.size());
  parallelFor(train_paths.size(), workers, [&](std::size_t i) {
    try {
      auto notes = smf::extractNotes(smf::parseSmfFile(train_paths[i]));
      seqs[i] = tokenizer::encode(notes, kind, train_paths[i].generic_string());
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  std::vector<tokenizer::TokenSequence> ok;
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    if (errors[i].empty())
      ok.push_back(std::move(seqs[i]));
    else
      std::cerr << train_paths[i].generic_string() << ": " << errors[i] << '\n';
  }
  auto model = gen::trainMarkov(ok, order, alpha);
  model.save(out_path);
  std::cout << "trained order-" << order << " model on " << ok.size()
            << " files -> " << out_path.generic_string() << '\n';
  return 0;
}

int cmdGenerate(const fs::path& model_path, const fs::path& manifest_path,
                const gen::HarnessConfig& harness, const fs::path& out_dir,
                const std::string& format, int workers) {
  auto model = gen::MarkovModel::load(model_path);
  auto manifest = loadManifest(manifest_path);
  auto test_paths = manifest.pathsFor(Split::Test);
  std::vector<tokenizer::TokenSequence> seqs(test_paths.size());
  std::vector<char> bad(test_paths.size(), 0);
  parallelFor(test_paths.size(), workers, [&](std::size_t i) {
    try {
      auto notes = smf::extractNotes(smf::parseSmfFile(test_paths[i]));
      seqs[i] = tokenizer::encode(notes, model.kind(),
                                  test_paths[i].generic_string());
    } catch (const std::exception&) {
      bad[i] = 1;
    }
  });
  std::vector<tokenizer::TokenSequence> test_corpus;
  for (std::size_t i = 0; i < seqs.size(); ++i)
    if (!bad[i]) test_corpus.push_back(std::move(seqs[i]));

  auto outputs = gen::runHarness(model, test_corpus, harness);
  fs::create_directories(out_dir);
  json index;
  index["config"] = {{"model", model_path.generic_string()},
                     {"primer_len", harness.primer_len},
                     {"total_len", harness.total_len},
                     {"continuations_per_primer", harness.continuations_per_primer},
                     {"primers_per_dataset", harness.primers_per_dataset},
                     {"temperature", harness.temperature},
                     {"argmax", harness.argmax},
                     {"seed", harness.seed}};
  json files = json::array();
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "gen_%03zu", i);
    fs::path out = out_dir / name;
    if (format == "text") {
      out.replace_extension(".tokens");
      tokenizer::writeTokenTextFile(outputs[i], out);
    } else {
      out.replace_extension(".stok");
      tokenizer::writeTokenBinaryFile(outputs[i], out);
    }
    files.push_back({{"file", out.filename().generic_string()},
                     {"source", outputs[i].source_id}});
  }
  index["files"] = files;
  writeTextFile(out_dir / "index.json", index.dump(2) + "\n");
  std::cout << "generated " << outputs.size() << " sequences of "
            << harness.total_len << " tokens\n";
  return 0;
}

int cmdMetrics(const std::vector<std::string>& inputs,
               const metrics::MetricParams& params, const fs::path& out_path,
               int workers) {
  std::vector<fs::path> paths;
  for (const auto& input : inputs) {
    fs::path p(input);
    if (fs::is_directory(p)) {
      for (const auto& entry : fs::recursive_directory_iterator(p))
        if (entry.is_regular_file() &&
            (hasMidiExtension(entry.path()) ||
             entry.path().extension() == ".stok" ||
             entry.path().extension() == ".tokens"))
          paths.push_back(entry.path());
    } else {
      paths.push_back(p);
    }
  }
  std::sort(paths.begin(), paths.end(), [](const fs::path& a, const fs::path& b) {
    return a.generic_string() < b.generic_string();
  });
  if (paths.empty()) {
    std::cerr << "no inputs\n";
    return 1;
  }

  metrics::MetricParams piece_params = params;
  piece_params.workers = 1;
  std::vector<metrics::MetricReport> reports(paths.size());
  std::vector<std::string> errors(paths.size());
  parallelFor(paths.size(), workers, [&](std::size_t i) {
    try {
      smf::NoteList notes;
      int anomalies = 0;
      if (hasMidiExtension(paths[i])) {
        notes = smf::extractNotes(smf::parseSmfFile(paths[i]));
      } else {
        auto decoded = tokenizer::decode(readTokenFile(paths[i]));
        notes = decoded.notes;
        anomalies = decoded.anomalies;
      }
      reports[i] = metrics::computeMetricReport(
          notes, paths[i].generic_string(), piece_params);
      reports[i].anomalies += anomalies;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  std::vector<metrics::MetricReport> ok;
  int failures = 0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (errors[i].empty()) {
      ok.push_back(reports[i]);
    } else {
      ++failures;
      std::cerr << paths[i].generic_string() << ": " << errors[i] << '\n';
    }
  }
  std::string json_text = report::metricReportsToJson(ok);
  if (out_path.empty()) {
    std::cout << json_text;
  } else {
    writeTextFile(out_path, json_text);
    fs::path csv = out_path;
    csv.replace_extension(".csv");
    writeTextFile(csv, report::metricReportsToCsv(ok));
  }
  return failures == static_cast<int>(paths.size()) ? 1 : 0;
}

int cmdCompare(const fs::path& a_path, const fs::path& b_path,
               const stats::CompareConfig& config, const fs::path& out_dir) {
  auto a = report::metricReportsFromJson(readTextFile(a_path));
  auto b = report::metricReportsFromJson(readTextFile(b_path));
  auto table = stats::compareSets(a, b, config);
  std::cout << report::comparisonToText(table);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    writeTextFile(out_dir / "comparison.json", report::comparisonToJson(table));
    writeTextFile(out_dir / "comparison.csv", report::comparisonToCsv(table));
    writeTextFile(out_dir / "comparison.txt", report::comparisonToText(table));
  }
  return 0;
}

int cmdSurvey(const fs::path& csv_path, const fs::path& out_dir) {
  auto data = stats::parseSurveyCsv(readTextFile(csv_path));
  for (const auto& error : data.errors) std::cerr << error << '\n';
  if (data.rows.empty()) {
    std::cerr << "no valid survey rows\n";
    return 1;
  }
  auto report = stats::analyzeSurvey(data);
  std::cout << stats::surveyReportToText(report);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    writeTextFile(out_dir / "survey.json", stats::surveyReportToJson(report));
    writeTextFile(out_dir / "survey.csv", stats::surveyReportToCsv(report));
  }
  return 0;
}

int cmdScapeplot(const fs::path& midi_path, const fs::path& out_path,
                 const std::string& format,
                 const metrics::MetricParams& params) {
  auto notes = smf::extractNotes(smf::parseSmfFile(midi_path));
  auto chroma = metrics::chromagram(notes, params.frame_rate);
  if (chroma.frames.size() < 2)
    throw Error(ErrorCode::TooShort, "piece yields fewer than 2 frames");
  auto enhanced = metrics::enhanceSsm(metrics::computeSsm(chroma), params.enhance);
  metrics::ScapeOptions options;
  options.exact = params.scape_exact;
  options.work_budget = params.scape_work_budget;
  options.workers = params.workers;
  auto plot = metrics::fitnessScapePlot(enhanced, options);

  std::ofstream out(out_path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + out_path.string());
  if (format == "pgm")
    metrics::writeScapePgm(plot, out);
  else
    metrics::writeScapeCsv(plot, out);
  return 0;
}

int cmdExperiment(const fs::path& manifest_path, const RunConfig& config,
                  const fs::path& out_dir, bool quiet) {
  auto manifest = loadManifest(manifest_path);
  auto result = runExperiment(manifest, config, out_dir,
                              quiet ? nullptr : &std::cerr);
  std::cout << report::comparisonToText(result.comparison);
  std::cout << "artifacts written to " << out_dir.generic_string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"token representations and structural metrics for MIDI corpora"};
  app.require_subcommand(1);

  uint64_t seed = envSeedFallback();
  int workers = 0;
  app.add_option("--seed", seed, "master RNG seed (env STRUCTOK_SEED)")
      ->capture_default_str();
  app.add_option("--workers", workers, "worker threads (0 = all cores)")
      ->capture_default_str();

  // inspect
  auto* inspect = app.add_subcommand("inspect", "summarize MIDI files");
  std::vector<std::string> inspect_inputs;
  bool inspect_json = false;
  inspect->add_option("inputs", inspect_inputs, "files or directories")
      ->required();
  inspect->add_flag("--json", inspect_json, "emit JSON instead of text");

  // tokenize
  auto* tokenize = app.add_subcommand("tokenize", "encode MIDI to token files");
  std::vector<std::string> tokenize_inputs;
  std::string tokenize_kind = "onoff";
  std::string tokenize_format = "text";
  fs::path tokenize_out = "tokens";
  tokenize->add_option("inputs", tokenize_inputs, "files or directories")
      ->required();
  tokenize->add_option("--kind", tokenize_kind, "onoff|explicit")
      ->capture_default_str();
  tokenize->add_option("--format", tokenize_format, "text|binary")
      ->capture_default_str();
  tokenize->add_option("--out", tokenize_out, "output directory")
      ->capture_default_str();

  // detokenize
  auto* detokenize =
      app.add_subcommand("detokenize", "decode token files back to MIDI");
  std::vector<std::string> detokenize_inputs;
  fs::path detokenize_out = "midi";
  detokenize->add_option("inputs", detokenize_inputs, ".tokens or .stok files")
      ->required();
  detokenize->add_option("--out", detokenize_out, "output directory")
      ->capture_default_str();

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "corpus statistics table");
  fs::path stats_manifest;
  fs::path stats_out;
  stats_cmd->add_option("--manifest", stats_manifest, "dataset manifest JSON")
      ->required();
  stats_cmd->add_option("--out", stats_out, "also write JSON here");

  // train
  auto* train = app.add_subcommand("train", "train the Markov model");
  fs::path train_manifest, train_out = "model.smkv";
  std::string train_kind = "onoff";
  int train_order = gen::kDefaultMarkovOrder;
  double train_alpha = gen::kDefaultMarkovAlpha;
  train->add_option("--manifest", train_manifest, "dataset manifest JSON")
      ->required();
  train->add_option("--kind", train_kind, "onoff|explicit")
      ->capture_default_str();
  train->add_option("--out", train_out, "model output path")
      ->capture_default_str();
  train->add_option("--order", train_order, "Markov order")
      ->capture_default_str();
  train->add_option("--alpha", train_alpha, "smoothing")
      ->capture_default_str();

  // generate
  auto* generate = app.add_subcommand("generate", "primer continuations");
  fs::path generate_model, generate_manifest, generate_out = "generated";
  std::string generate_format = "binary";
  gen::HarnessConfig harness;
  generate->add_option("--model", generate_model, "SMKV model file")
      ->required();
  generate->add_option("--manifest", generate_manifest, "dataset manifest JSON")
      ->required();
  generate->add_option("--out", generate_out, "output directory")
      ->capture_default_str();
  generate->add_option("--format", generate_format, "binary|text")
      ->capture_default_str();
  generate->add_option("--primer-len", harness.primer_len)
      ->capture_default_str();
  generate->add_option("--total-len", harness.total_len)
      ->capture_default_str();
  generate->add_option("--continuations", harness.continuations_per_primer)
      ->capture_default_str();
  generate->add_option("--primers", harness.primers_per_dataset)
      ->capture_default_str();
  generate->add_option("--temperature", harness.temperature)
      ->capture_default_str();
  generate->add_flag("--argmax", harness.argmax, "greedy decoding");

  // metrics
  auto* metrics_cmd =
      app.add_subcommand("metrics", "per-piece structural metrics");
  std::vector<std::string> metrics_inputs;
  fs::path metrics_out;
  metrics::MetricParams metric_params;
  metrics_cmd->add_option("inputs", metrics_inputs, "MIDI or token files")
      ->required();
  metrics_cmd->add_option("--out", metrics_out, "report JSON path (.csv twin)");
  metrics_cmd->add_option("--frame-rate", metric_params.frame_rate)
      ->capture_default_str();
  metrics_cmd->add_option("--windows", metric_params.consistency_windows)
      ->capture_default_str();
  metrics_cmd->add_flag("--scape-exact", metric_params.scape_exact,
                        "evaluate every scape segment");

  // compare
  auto* compare = app.add_subcommand("compare", "compare two metric reports");
  fs::path compare_a, compare_b, compare_out;
  stats::CompareConfig compare_config;
  compare->add_option("--a", compare_a, "report JSON (original)")->required();
  compare->add_option("--b", compare_b, "report JSON (explicit)")->required();
  compare->add_option("--out", compare_out, "output directory");
  compare->add_option("--bootstrap-n", compare_config.resamples)
      ->capture_default_str();
  compare->add_option("--level", compare_config.level)->capture_default_str();

  // survey
  auto* survey = app.add_subcommand("survey", "analyze listening-study CSV");
  fs::path survey_csv, survey_out;
  survey->add_option("csv", survey_csv, "survey CSV")->required();
  survey->add_option("--out", survey_out, "output directory");

  // scapeplot
  auto* scapeplot = app.add_subcommand("scapeplot", "export a fitness scape plot");
  fs::path scape_midi, scape_out = "scape.csv";
  std::string scape_format = "csv";
  metrics::MetricParams scape_params;
  scapeplot->add_option("midi", scape_midi, "MIDI file")->required();
  scapeplot->add_option("--out", scape_out, "output path")
      ->capture_default_str();
  scapeplot->add_option("--format", scape_format, "csv|pgm")
      ->capture_default_str();
  scapeplot->add_option("--frame-rate", scape_params.frame_rate)
      ->capture_default_str();
  scapeplot->add_flag("--exact", scape_params.scape_exact,
                      "evaluate every segment");

  // experiment
  auto* experiment =
      app.add_subcommand("experiment", "full notation-comparison pipeline");
  fs::path experiment_manifest, experiment_out = "experiment_out";
  RunConfig run_config;
  bool experiment_quiet = false;
  experiment->add_option("--manifest", experiment_manifest, "dataset manifest")
      ->required();
  experiment->add_option("--out", experiment_out, "output directory")
      ->capture_default_str();
  experiment->add_option("--primer-len", run_config.harness.primer_len)
      ->capture_default_str();
  experiment->add_option("--total-len", run_config.harness.total_len)
      ->capture_default_str();
  experiment
      ->add_option("--continuations", run_config.harness.continuations_per_primer)
      ->capture_default_str();
  experiment->add_option("--primers", run_config.harness.primers_per_dataset)
      ->capture_default_str();
  experiment->add_option("--temperature", run_config.harness.temperature)
      ->capture_default_str();
  experiment->add_option("--order", run_config.markov_order)
      ->capture_default_str();
  experiment->add_option("--alpha", run_config.markov_alpha)
      ->capture_default_str();
  experiment->add_option("--frame-rate", run_config.metric_params.frame_rate)
      ->capture_default_str();
  experiment
      ->add_option("--windows", run_config.metric_params.consistency_windows)
      ->capture_default_str();
  experiment->add_option("--bootstrap-n", run_config.bootstrap_resamples)
      ->capture_default_str();
  experiment->add_option("--level", run_config.bootstrap_level)
      ->capture_default_str();
  experiment->add_flag("--scape-exact", run_config.metric_params.scape_exact,
                       "evaluate every scape segment");
  experiment->add_flag("--quiet", experiment_quiet, "suppress progress log");

  // make-corpus
  auto* make_corpus =
      app.add_subcommand("make-corpus", "write the synthetic mini-corpus");
  fs::path corpus_out = "mini_corpus";
  make_corpus->add_option("--out", corpus_out, "output directory")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*inspect) return cmdInspect(inspect_inputs, inspect_json);
    if (*tokenize)
      return cmdTokenize(tokenize_inputs, tokenize_kind, tokenize_out,
                         tokenize_format, workers);
    if (*detokenize) return cmdDetokenize(detokenize_inputs, detokenize_out);
    if (*stats_cmd) return cmdStats(stats_manifest, stats_out, workers);
    if (*train)
      return cmdTrain(train_manifest, train_kind, train_out, train_order,
                      train_alpha, workers);
    if (*generate) {
      harness.seed = derivedSeed(seed, 10);
      return cmdGenerate(generate_model, generate_manifest, harness,
                         generate_out, generate_format, workers);
    }
    if (*metrics_cmd) {
      metric_params.workers = workers;
      return cmdMetrics(metrics_inputs, metric_params, metrics_out, workers);
    }
    if (*compare) {
      compare_config.seed = derivedSeed(seed, 20);
      return cmdCompare(compare_a, compare_b, compare_config, compare_out);
    }
    if (*survey) return cmdSurvey(survey_csv, survey_out);
    if (*scapeplot) {
      scape_params.workers = workers;
      return cmdScapeplot(scape_midi, scape_out, scape_format, scape_params);
    }
    if (*experiment) {
      run_config.seed = seed;
      run_config.workers = workers;
      return cmdExperiment(experiment_manifest, run_config, experiment_out,
                           experiment_quiet);
    }
    if (*make_corpus) {
      auto manifest = writeMiniCorpus(corpus_out, seed == 0 ? kMiniCorpusSeed : seed);
      std::cout << "wrote mini corpus manifest " << manifest.generic_string()
                << '\n';
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error [" << errorCodeName(e.code()) << "]: " << e.what()
              << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
