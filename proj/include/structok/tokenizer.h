// Token representations for note sequences: the baseline NoteOn/NoteOff
// event vocabulary and the explicit NoteOn/Duration vocabulary, plus the
// corpus statistics used to compare them.
//
// Both vocabularies share a 10 ms time grid (TIME_SHIFT indices 1..100, up
// to one second per token) and 32 velocity bins. The explicit vocabulary
// replaces the 128 NOTE_OFF tokens with 140 DURATION bins: 10 ms steps up
// to 1 s, then 100 ms steps up to 5 s, clamping beyond.

#ifndef STRUCTOK_TOKENIZER_H_
#define STRUCTOK_TOKENIZER_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "structok/smf.h"

namespace structok::tokenizer {

enum class RepresentationKind : uint8_t {
  OnOff = 0,
  ExplicitDuration = 1,
};

enum class TokenFamily {
  NoteOn,
  NoteOff,
  TimeShift,
  Velocity,
  Duration,
};

const char* familyName(TokenFamily family);
const char* kindName(RepresentationKind kind);

// Family + within-family index. Index semantics: NOTE_ON/NOTE_OFF take the
// MIDI pitch (0..127), VELOCITY the bin (0..31), TIME_SHIFT 1..100 and
// DURATION 1..140 (1-based, matching the token text format).
struct TokenRef {
  TokenFamily family;
  int index;

  bool operator==(const TokenRef&) const = default;
};

class Vocabulary {
 public:
  struct FamilySpec {
    TokenFamily family;
    int cardinality;
    int base_id;
    int first_index;  // 0 for pitch/velocity families, 1 for shift/duration
  };

  static const Vocabulary& forKind(RepresentationKind kind);

  RepresentationKind kind() const { return kind_; }
  int size() const { return size_; }
  const std::vector<FamilySpec>& families() const { return families_; }

  uint16_t idFor(TokenFamily family, int index) const;
  TokenRef refOf(uint16_t id) const;
  bool contains(uint16_t id) const { return id < size_; }

 private:
  explicit Vocabulary(RepresentationKind kind);

  RepresentationKind kind_;
  int size_ = 0;
  std::vector<FamilySpec> families_;
};

struct TokenSequence {
  RepresentationKind kind = RepresentationKind::OnOff;
  std::vector<uint16_t> ids;
  std::string source_id;

  bool operator==(const TokenSequence&) const = default;
};

inline constexpr double kGridSeconds = 0.01;
inline constexpr int kMaxTimeShiftIndex = 100;
inline constexpr int kMaxDurationIndex = 140;
inline constexpr int kVelocityBins = 32;
inline constexpr int kDefaultVelocityBin = 20;

int quantizeVelocity(int velocity);   // 1..127 -> bin 0..31
int velocityBinValue(int bin);        // decode midpoint, clamped to [1,127]
std::vector<int> quantizeTimeShift(double gap_s);
double timeShiftValue(int index);
int quantizeDuration(double duration_s);  // nearest of the 140 bin values
double durationBinValue(int index);

TokenSequence encode(const smf::NoteList& notes, RepresentationKind kind,
                     std::string source_id = "");

struct DecodeResult {
  smf::NoteList notes;
  int anomalies = 0;  // orphan offs/durations, defaulted durations, open notes
};

// Lenient inverse of encode: malformed fragments are repaired or skipped and
// tallied, never fatal.
DecodeResult decode(const TokenSequence& seq);

struct CorpusStats {
  RepresentationKind kind = RepresentationKind::OnOff;
  int file_count = 0;
  double mean_length = 0.0;
  double mean_unique = 0.0;
  std::map<std::string, int64_t> family_counts;
};

CorpusStats corpusStats(const std::vector<TokenSequence>& seqs);

}  // namespace structok::tokenizer

#endif  // STRUCTOK_TOKENIZER_H_
