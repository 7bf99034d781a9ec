// Pluggable next-token model interface and the order-k Markov reference
// model with add-alpha smoothing and backoff that stands in for a trained
// transformer.

#ifndef STRUCTOK_MARKOV_H_
#define STRUCTOK_MARKOV_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "structok/tokenizer.h"

namespace structok::gen {

class GeneratorModel {
 public:
  virtual ~GeneratorModel() = default;

  virtual tokenizer::RepresentationKind kind() const = 0;
  virtual int vocabSize() const = 0;

  // Fills `probs` (resized to vocabSize()) with the next-token distribution
  // given the context; sums to 1 and has full support.
  virtual void distribution(std::span<const uint16_t> context,
                            std::vector<double>& probs) const = 0;
};

inline constexpr int kDefaultMarkovOrder = 3;
inline constexpr double kDefaultMarkovAlpha = 0.1;

class MarkovModel : public GeneratorModel {
 public:
  MarkovModel(tokenizer::RepresentationKind kind, int order, double alpha);

  tokenizer::RepresentationKind kind() const override { return kind_; }
  int vocabSize() const override { return vocab_size_; }
  int order() const { return order_; }
  double alpha() const { return alpha_; }

  // P(next | context) = (count + alpha) / (total + alpha * V) at the longest
  // seen order, backing off to shorter contexts down to the unigram and
  // finally the uniform distribution.
  void distribution(std::span<const uint16_t> context,
                    std::vector<double>& probs) const override;

  void save(const std::filesystem::path& path) const;
  static MarkovModel load(const std::filesystem::path& path);

 private:
  friend MarkovModel trainMarkov(
      const std::vector<tokenizer::TokenSequence>& corpus, int order,
      double alpha);

  struct ContextCounts {
    std::unordered_map<uint16_t, uint64_t> next;
    uint64_t total = 0;
  };
  using Table = std::unordered_map<std::u16string, ContextCounts>;

  tokenizer::RepresentationKind kind_;
  int order_;
  double alpha_;
  int vocab_size_;
  std::vector<Table> tables_;  // index = context length, 0..order
};

// Counts every m-gram (m = 0..order) over the corpus. Throws EmptyCorpus.
MarkovModel trainMarkov(const std::vector<tokenizer::TokenSequence>& corpus,
                        int order = kDefaultMarkovOrder,
                        double alpha = kDefaultMarkovAlpha);

}  // namespace structok::gen

#endif  // STRUCTOK_MARKOV_H_
