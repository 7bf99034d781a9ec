#include "structok/harness.h"

#include <cmath>
#include <random>

#include "structok/error.h"
#include "structok/util.h"

namespace structok::gen {

namespace {

double unitUniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t sampleIndex(const std::vector<double>& probs, double u) {
  double cumulative = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    cumulative += probs[i];
    if (u < cumulative) return i;
  }
  return probs.size() - 1;  // guard against rounding at the top end
}

std::size_t argmaxIndex(const std::vector<double>& probs) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < probs.size(); ++i)
    if (probs[i] > probs[best]) best = i;
  return best;
}

void applyTemperature(std::vector<double>& probs, double temperature) {
  if (temperature == 1.0) return;
  double total = 0.0;
  for (double& p : probs) {
    p = p > 0.0 ? std::pow(p, 1.0 / temperature) : 0.0;
    total += p;
  }
  for (double& p : probs) p /= total;
}

}  // namespace

tokenizer::TokenSequence sampleContinuation(const GeneratorModel& model,
                                            std::span<const uint16_t> primer,
                                            int total_len, double temperature,
                                            uint64_t seed, bool argmax,
                                            std::string source_id) {
  if (static_cast<int>(primer.size()) >= total_len)
    throw Error(ErrorCode::InvalidArgument,
                "primer must be shorter than the total length");
  if (temperature <= 0.0)
    throw Error(ErrorCode::InvalidArgument, "temperature must be positive");

  tokenizer::TokenSequence seq;
  seq.kind = model.kind();
  seq.source_id = std::move(source_id);
  seq.ids.assign(primer.begin(), primer.end());
  seq.ids.reserve(static_cast<std::size_t>(total_len));

  std::mt19937_64 rng(seed);
  std::vector<double> probs;
  while (static_cast<int>(seq.ids.size()) < total_len) {
    model.distribution(seq.ids, probs);
    std::size_t id;
    if (argmax) {
      id = argmaxIndex(probs);
    } else {
      applyTemperature(probs, temperature);
      id = sampleIndex(probs, unitUniform(rng));
    }
    seq.ids.push_back(static_cast<uint16_t>(id));
  }
  return seq;
}

std::vector<tokenizer::TokenSequence> runHarness(
    const GeneratorModel& model,
    const std::vector<tokenizer::TokenSequence>& test_corpus,
    const HarnessConfig& cfg) {
  if (cfg.primer_len >= cfg.total_len)
    throw Error(ErrorCode::InvalidArgument, "primer_len must be < total_len");

  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < test_corpus.size(); ++i)
    if (static_cast<int>(test_corpus[i].ids.size()) >= cfg.primer_len)
      eligible.push_back(i);
  if (static_cast<int>(eligible.size()) < cfg.primers_per_dataset)
    throw Error(ErrorCode::InsufficientCorpus,
                "only " + std::to_string(eligible.size()) +
                    " of the required " +
                    std::to_string(cfg.primers_per_dataset) +
                    " test pieces have enough tokens");

  // Seeded partial Fisher-Yates: selection without replacement.
  std::mt19937_64 rng(derivedSeed(cfg.seed, 0));
  for (int i = 0; i < cfg.primers_per_dataset; ++i) {
    std::size_t j = i + rng() % (eligible.size() - static_cast<std::size_t>(i));
    std::swap(eligible[static_cast<std::size_t>(i)], eligible[j]);
  }

  std::vector<tokenizer::TokenSequence> outputs;
  outputs.reserve(static_cast<std::size_t>(cfg.primers_per_dataset) *
                  cfg.continuations_per_primer);
  for (int i = 0; i < cfg.primers_per_dataset; ++i) {
    const auto& piece = test_corpus[eligible[static_cast<std::size_t>(i)]];
    std::span<const uint16_t> primer(piece.ids.data(),
                                     static_cast<std::size_t>(cfg.primer_len));
    for (int c = 0; c < cfg.continuations_per_primer; ++c) {
      uint64_t sample_seed = derivedSeed(
          cfg.seed, 4,
          static_cast<uint64_t>(i) * cfg.continuations_per_primer +
              static_cast<uint64_t>(c));
      std::string source = piece.source_id.empty()
                               ? "piece" + std::to_string(eligible[i])
                               : piece.source_id;
      outputs.push_back(sampleContinuation(
          model, primer, cfg.total_len, cfg.temperature, sample_seed,
          cfg.argmax, source + "#c" + std::to_string(c)));
    }
  }
  return outputs;
}

}  // namespace structok::gen
