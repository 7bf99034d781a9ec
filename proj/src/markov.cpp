#include "structok/markov.h"

#include <algorithm>
#include <cstring>

#include "structok/error.h"
#include "structok/util.h"

namespace structok::gen {

namespace {

constexpr char kMagic[4] = {'S', 'M', 'K', 'V'};
constexpr uint32_t kVersion = 1;

void putU32(uint32_t v, std::vector<uint8_t>& out) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}
void putU64(uint64_t v, std::vector<uint8_t>& out) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}
void putU16(uint16_t v, std::vector<uint8_t>& out) {
  out.push_back(static_cast<uint8_t>(v & 0xFF));
  out.push_back(static_cast<uint8_t>(v >> 8));
}
void putF64(double v, std::vector<uint8_t>& out) {
  uint64_t bits;
  static_assert(sizeof(bits) == sizeof(v));
  std::memcpy(&bits, &v, sizeof(bits));
  putU64(bits, out);
}

struct Cursor {
  const std::vector<uint8_t>& bytes;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > bytes.size())
      throw Error(ErrorCode::MalformedInput, "truncated model file");
  }
  uint8_t u8() {
    need(1);
    return bytes[pos++];
  }
  uint16_t u16() {
    need(2);
    uint16_t v = static_cast<uint16_t>(bytes[pos] | bytes[pos + 1] << 8);
    pos += 2;
    return v;
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = v << 8 | bytes[pos + i];
    pos += 4;
    return v;
  }
  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = v << 8 | bytes[pos + i];
    pos += 8;
    return v;
  }
  double f64() {
    uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }
};

}  // namespace

MarkovModel::MarkovModel(tokenizer::RepresentationKind kind, int order,
                         double alpha)
    : kind_(kind),
      order_(order),
      alpha_(alpha),
      vocab_size_(tokenizer::Vocabulary::forKind(kind).size()),
      tables_(static_cast<std::size_t>(order) + 1) {
  if (order < 1)
    throw Error(ErrorCode::InvalidArgument, "markov order must be >= 1");
  if (alpha <= 0.0)
    throw Error(ErrorCode::InvalidArgument, "smoothing alpha must be > 0");
}

void MarkovModel::distribution(std::span<const uint16_t> context,
                               std::vector<double>& probs) const {
  probs.assign(static_cast<std::size_t>(vocab_size_), 0.0);
  int max_len = std::min<int>(order_, static_cast<int>(context.size()));
  for (int len = max_len; len >= 0; --len) {
    std::u16string key(context.end() - len, context.end());
    auto it = tables_[static_cast<std::size_t>(len)].find(key);
    if (it == tables_[static_cast<std::size_t>(len)].end() ||
        it->second.total == 0)
      continue;
    const ContextCounts& counts = it->second;
    double denom = static_cast<double>(counts.total) + alpha_ * vocab_size_;
    for (std::size_t id = 0; id < probs.size(); ++id) probs[id] = alpha_ / denom;
    for (const auto& [id, count] : counts.next)
      probs[id] = (static_cast<double>(count) + alpha_) / denom;
    return;
  }
  // Nothing seen at any order: uniform.
  double uniform = 1.0 / vocab_size_;
  for (double& p : probs) p = uniform;
}

MarkovModel trainMarkov(const std::vector<tokenizer::TokenSequence>& corpus,
                        int order, double alpha) {
  if (corpus.empty())
    throw Error(ErrorCode::EmptyCorpus, "markov training corpus is empty");
  for (const auto& seq : corpus)
    if (seq.kind != corpus.front().kind)
      throw Error(ErrorCode::InvalidArgument,
                  "training corpus mixes representation kinds");

  MarkovModel model(corpus.front().kind, order, alpha);
  for (const auto& seq : corpus) {
    const auto& ids = seq.ids;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      int max_len = std::min<std::size_t>(order, i);
      for (int len = 0; len <= max_len; ++len) {
        std::u16string key(ids.begin() + (i - len), ids.begin() + i);
        auto& counts = model.tables_[static_cast<std::size_t>(len)][key];
        ++counts.next[ids[i]];
        ++counts.total;
      }
    }
  }
  return model;
}

void MarkovModel::save(const std::filesystem::path& path) const {
  std::vector<uint8_t> out;
  out.insert(out.end(), kMagic, kMagic + 4);
  putU32(kVersion, out);
  putU32(static_cast<uint32_t>(order_), out);
  putF64(alpha_, out);
  putU32(static_cast<uint32_t>(vocab_size_), out);
  out.push_back(static_cast<uint8_t>(kind_));

  for (const auto& table : tables_) {
    // Deterministic layout: contexts sorted lexicographically.
    std::vector<const std::u16string*> keys;
    keys.reserve(table.size());
    for (const auto& [key, counts] : table) keys.push_back(&key);
    std::sort(keys.begin(), keys.end(),
              [](const auto* a, const auto* b) { return *a < *b; });

    putU32(static_cast<uint32_t>(keys.size()), out);
    for (const auto* key : keys) {
      putU16(static_cast<uint16_t>(key->size()), out);
      for (char16_t c : *key) putU16(static_cast<uint16_t>(c), out);
      const ContextCounts& counts = table.at(*key);
      std::vector<std::pair<uint16_t, uint64_t>> entries(counts.next.begin(),
                                                         counts.next.end());
      std::sort(entries.begin(), entries.end());
      putU32(static_cast<uint32_t>(entries.size()), out);
      for (const auto& [id, count] : entries) {
        putU16(id, out);
        putU64(count, out);
      }
    }
  }
  writeBinaryFile(path, out);
}

MarkovModel MarkovModel::load(const std::filesystem::path& path) {
  auto bytes = readBinaryFile(path);
  Cursor cursor{bytes};
  cursor.need(4);
  if (!std::equal(kMagic, kMagic + 4, bytes.begin()))
    throw Error(ErrorCode::MalformedInput, "not a SMKV model file");
  cursor.pos = 4;
  if (cursor.u32() != kVersion)
    throw Error(ErrorCode::MalformedInput, "unsupported model version");
  auto order = static_cast<int>(cursor.u32());
  double alpha = cursor.f64();
  auto vocab_size = static_cast<int>(cursor.u32());
  uint8_t kind_byte = cursor.u8();
  if (kind_byte > 1)
    throw Error(ErrorCode::MalformedInput, "unknown representation kind byte");

  MarkovModel model(static_cast<tokenizer::RepresentationKind>(kind_byte),
                    order, alpha);
  if (model.vocab_size_ != vocab_size)
    throw Error(ErrorCode::MalformedInput, "vocabulary size mismatch");

  for (int len = 0; len <= order; ++len) {
    uint32_t n_contexts = cursor.u32();
    for (uint32_t c = 0; c < n_contexts; ++c) {
      uint16_t key_len = cursor.u16();
      std::u16string key;
      key.reserve(key_len);
      for (uint16_t i = 0; i < key_len; ++i)
        key.push_back(static_cast<char16_t>(cursor.u16()));
      ContextCounts counts;
      uint32_t n_entries = cursor.u32();
      for (uint32_t e = 0; e < n_entries; ++e) {
        uint16_t id = cursor.u16();
        uint64_t count = cursor.u64();
        counts.next[id] = count;
        counts.total += count;
      }
      model.tables_[static_cast<std::size_t>(len)][std::move(key)] =
          std::move(counts);
    }
  }
  return model;
}

}  // namespace structok::gen
