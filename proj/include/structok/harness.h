// Generation harness: primer extraction from a test corpus and seeded
// autoregressive continuation to a fixed token budget.

#ifndef STRUCTOK_HARNESS_H_
#define STRUCTOK_HARNESS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "structok/markov.h"

namespace structok::gen {

struct HarnessConfig {
  int primer_len = 256;
  int total_len = 2048;
  int continuations_per_primer = 3;
  int primers_per_dataset = 10;
  double temperature = 1.0;
  bool argmax = false;  // temperature -> 0 limit
  uint64_t seed = 0;
};

// Extends `primer` by sampling from the model until the sequence holds
// `total_len` tokens. The output begins with the primer verbatim and is
// fully determined by the seed.
tokenizer::TokenSequence sampleContinuation(const GeneratorModel& model,
                                            std::span<const uint16_t> primer,
                                            int total_len, double temperature,
                                            uint64_t seed, bool argmax = false,
                                            std::string source_id = "");

// Picks cfg.primers_per_dataset test pieces without replacement (pieces
// shorter than primer_len are skipped with a warning tally), then emits
// cfg.continuations_per_primer continuations per primer. Each output's
// source_id records the primer source and continuation index. Throws
// InsufficientCorpus when too few pieces are eligible.
std::vector<tokenizer::TokenSequence> runHarness(
    const GeneratorModel& model,
    const std::vector<tokenizer::TokenSequence>& test_corpus,
    const HarnessConfig& cfg);

}  // namespace structok::gen

#endif  // STRUCTOK_HARNESS_H_
