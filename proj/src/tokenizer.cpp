#include "structok/tokenizer.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "structok/error.h"

namespace structok::tokenizer {

namespace {

int64_t toGrid(double seconds) {
  return static_cast<int64_t>(std::llround(seconds / kGridSeconds));
}

double fromGrid(int64_t units) {
  return static_cast<double>(units) * kGridSeconds;
}

void emitTimeShift(int64_t gap_units, const Vocabulary& vocab,
                   std::vector<uint16_t>& out) {
  while (gap_units >= kMaxTimeShiftIndex) {
    out.push_back(vocab.idFor(TokenFamily::TimeShift, kMaxTimeShiftIndex));
    gap_units -= kMaxTimeShiftIndex;
  }
  if (gap_units > 0)
    out.push_back(vocab.idFor(TokenFamily::TimeShift, static_cast<int>(gap_units)));
}

}  // namespace

const char* familyName(TokenFamily family) {
  switch (family) {
    case TokenFamily::NoteOn: return "NOTE_ON";
    case TokenFamily::NoteOff: return "NOTE_OFF";
    case TokenFamily::TimeShift: return "TIME_SHIFT";
    case TokenFamily::Velocity: return "VELOCITY";
    case TokenFamily::Duration: return "DURATION";
  }
  return "?";
}

const char* kindName(RepresentationKind kind) {
  return kind == RepresentationKind::OnOff ? "onoff" : "explicit";
}

Vocabulary::Vocabulary(RepresentationKind kind) : kind_(kind) {
  auto add = [this](TokenFamily family, int cardinality, int first_index) {
    families_.push_back({family, cardinality, size_, first_index});
    size_ += cardinality;
  };
  add(TokenFamily::NoteOn, 128, 0);
  if (kind == RepresentationKind::OnOff)
    add(TokenFamily::NoteOff, 128, 0);
  else
    add(TokenFamily::Duration, kMaxDurationIndex, 1);
  add(TokenFamily::TimeShift, kMaxTimeShiftIndex, 1);
  add(TokenFamily::Velocity, kVelocityBins, 0);
}

const Vocabulary& Vocabulary::forKind(RepresentationKind kind) {
  static const Vocabulary on_off(RepresentationKind::OnOff);
  static const Vocabulary explicit_duration(RepresentationKind::ExplicitDuration);
  return kind == RepresentationKind::OnOff ? on_off : explicit_duration;
}

uint16_t Vocabulary::idFor(TokenFamily family, int index) const {
  for (const auto& spec : families_) {
    if (spec.family != family) continue;
    int offset = index - spec.first_index;
    if (offset < 0 || offset >= spec.cardinality)
      throw Error(ErrorCode::InvalidArgument,
                  std::string(familyName(family)) + " index out of range: " +
                      std::to_string(index));
    return static_cast<uint16_t>(spec.base_id + offset);
  }
  throw Error(ErrorCode::InvalidArgument,
              std::string(familyName(family)) + " not in this vocabulary");
}

TokenRef Vocabulary::refOf(uint16_t id) const {
  for (const auto& spec : families_) {
    if (id < spec.base_id + spec.cardinality)
      return {spec.family, spec.first_index + (id - spec.base_id)};
  }
  throw Error(ErrorCode::InvalidArgument,
              "token id out of range: " + std::to_string(id));
}

int quantizeVelocity(int velocity) {
  if (velocity < 1 || velocity > 127)
    throw Error(ErrorCode::InvalidArgument,
                "velocity out of range: " + std::to_string(velocity));
  return velocity / 4;
}

int velocityBinValue(int bin) {
  return std::clamp(bin * 4 + 2, 1, 127);
}

std::vector<int> quantizeTimeShift(double gap_s) {
  std::vector<int> indices;
  int64_t units = toGrid(gap_s);
  while (units >= kMaxTimeShiftIndex) {
    indices.push_back(kMaxTimeShiftIndex);
    units -= kMaxTimeShiftIndex;
  }
  if (units > 0) indices.push_back(static_cast<int>(units));
  return indices;
}

double timeShiftValue(int index) { return fromGrid(index); }

double durationBinValue(int index) {
  // Computed in 10 ms grid units so the value is bit-identical to what the
  // on/off decoder reconstructs from the same grid.
  int64_t units = index <= 100 ? index : 100 + (index - 100) * 10;
  return fromGrid(units);
}

int quantizeDuration(double duration_s) {
  // Nearest bin value wins; ties go to the lower index. The table is small
  // enough that a scan beats getting the 1 s boundary arithmetic subtly wrong.
  int best = 1;
  double best_err = std::abs(duration_s - durationBinValue(1));
  for (int index = 2; index <= kMaxDurationIndex; ++index) {
    double err = std::abs(duration_s - durationBinValue(index));
    if (err < best_err) {
      best = index;
      best_err = err;
    }
  }
  return best;
}

TokenSequence encode(const smf::NoteList& notes, RepresentationKind kind,
                     std::string source_id) {
  const Vocabulary& vocab = Vocabulary::forKind(kind);
  TokenSequence seq;
  seq.kind = kind;
  seq.source_id = std::move(source_id);

  struct Edge {
    int64_t time;
    bool is_on;
    uint8_t pitch;
    int velocity_bin;  // on-edges only
    int duration_index;  // explicit on-edges only
  };
  std::vector<Edge> edges;
  edges.reserve(notes.notes.size() * 2);
  for (const auto& note : notes.notes) {
    int64_t on = toGrid(note.onset_s);
    int bin = quantizeVelocity(note.velocity);
    if (kind == RepresentationKind::OnOff) {
      int64_t dur = std::max<int64_t>(1, toGrid(note.duration_s));
      edges.push_back({on, true, note.pitch, bin, 0});
      edges.push_back({on + dur, false, note.pitch, 0, 0});
    } else {
      edges.push_back({on, true, note.pitch, bin,
                       quantizeDuration(note.duration_s)});
    }
  }
  std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    if (a.time != b.time) return a.time < b.time;
    if (a.is_on != b.is_on) return !a.is_on;  // offs before ons
    return a.pitch < b.pitch;
  });

  int64_t clock = 0;
  int previous_bin = -1;
  for (const auto& edge : edges) {
    emitTimeShift(edge.time - clock, vocab, seq.ids);
    clock = edge.time;
    if (!edge.is_on) {
      seq.ids.push_back(vocab.idFor(TokenFamily::NoteOff, edge.pitch));
      continue;
    }
    if (edge.velocity_bin != previous_bin) {
      seq.ids.push_back(vocab.idFor(TokenFamily::Velocity, edge.velocity_bin));
      previous_bin = edge.velocity_bin;
    }
    seq.ids.push_back(vocab.idFor(TokenFamily::NoteOn, edge.pitch));
    if (kind == RepresentationKind::ExplicitDuration)
      seq.ids.push_back(vocab.idFor(TokenFamily::Duration, edge.duration_index));
  }
  return seq;
}

DecodeResult decode(const TokenSequence& seq) {
  const Vocabulary& vocab = Vocabulary::forKind(seq.kind);
  DecodeResult result;

  int64_t clock = 0;
  int velocity_bin = kDefaultVelocityBin;
  double max_end = 0.0;

  if (seq.kind == RepresentationKind::OnOff) {
    struct OpenNote {
      int64_t onset;
      int velocity;
    };
    std::deque<OpenNote> open[128];
    for (uint16_t id : seq.ids) {
      TokenRef ref = vocab.refOf(id);
      switch (ref.family) {
        case TokenFamily::TimeShift:
          clock += ref.index;
          break;
        case TokenFamily::Velocity:
          velocity_bin = ref.index;
          break;
        case TokenFamily::NoteOn:
          open[ref.index].push_back({clock, velocityBinValue(velocity_bin)});
          break;
        case TokenFamily::NoteOff: {
          auto& queue = open[ref.index];
          if (queue.empty()) {
            ++result.anomalies;  // off without a matching open note
            break;
          }
          OpenNote note = queue.front();
          queue.pop_front();
          int64_t dur = std::max<int64_t>(1, clock - note.onset);
          result.notes.notes.push_back({fromGrid(note.onset), fromGrid(dur),
                                        static_cast<uint8_t>(ref.index),
                                        static_cast<uint8_t>(note.velocity)});
          break;
        }
        default:
          ++result.anomalies;
          break;
      }
    }
    for (int pitch = 0; pitch < 128; ++pitch) {
      for (const auto& note : open[pitch]) {
        ++result.anomalies;  // left open at sequence end
        int64_t dur = std::max<int64_t>(1, clock - note.onset);
        result.notes.notes.push_back({fromGrid(note.onset), fromGrid(dur),
                                      static_cast<uint8_t>(pitch),
                                      static_cast<uint8_t>(note.velocity)});
      }
    }
  } else {
    struct PendingNote {
      int64_t onset;
      uint8_t pitch;
      int velocity;
    };
    std::vector<PendingNote> pending;  // at most one entry
    auto flushPending = [&](int duration_index, bool defaulted) {
      if (pending.empty()) return;
      if (defaulted) ++result.anomalies;  // NOTE_ON without a DURATION
      const PendingNote& note = pending.back();
      result.notes.notes.push_back(
          {fromGrid(note.onset), durationBinValue(duration_index), note.pitch,
           static_cast<uint8_t>(note.velocity)});
      pending.clear();
    };
    for (uint16_t id : seq.ids) {
      TokenRef ref = vocab.refOf(id);
      switch (ref.family) {
        case TokenFamily::TimeShift:
          flushPending(1, true);
          clock += ref.index;
          break;
        case TokenFamily::Velocity:
          velocity_bin = ref.index;
          break;
        case TokenFamily::NoteOn:
          flushPending(1, true);
          pending.push_back({clock, static_cast<uint8_t>(ref.index),
                             velocityBinValue(velocity_bin)});
          break;
        case TokenFamily::Duration:
          if (pending.empty())
            ++result.anomalies;  // orphan duration token
          else
            flushPending(ref.index, false);
          break;
        default:
          ++result.anomalies;
          break;
      }
    }
    flushPending(1, true);
  }

  for (const auto& note : result.notes.notes)
    max_end = std::max(max_end, note.onset_s + note.duration_s);
  std::sort(result.notes.notes.begin(), result.notes.notes.end(),
            smf::noteLess);
  result.notes.total_duration_s = std::max(fromGrid(clock), max_end);
  result.notes.warnings = result.anomalies;
  return result;
}

CorpusStats corpusStats(const std::vector<TokenSequence>& seqs) {
  if (seqs.empty())
    throw Error(ErrorCode::EmptyCorpus, "corpus statistics need at least one sequence");
  const RepresentationKind kind = seqs.front().kind;
  const Vocabulary& vocab = Vocabulary::forKind(kind);

  CorpusStats stats;
  stats.kind = kind;
  stats.file_count = static_cast<int>(seqs.size());
  for (const auto& spec : vocab.families())
    stats.family_counts[familyName(spec.family)] = 0;

  double total_length = 0.0;
  double total_unique = 0.0;
  for (const auto& seq : seqs) {
    if (seq.kind != kind)
      throw Error(ErrorCode::InvalidArgument,
                  "corpus mixes representation kinds");
    total_length += static_cast<double>(seq.ids.size());
    std::set<uint16_t> unique(seq.ids.begin(), seq.ids.end());
    total_unique += static_cast<double>(unique.size());
    for (uint16_t id : seq.ids)
      ++stats.family_counts[familyName(vocab.refOf(id).family)];
  }
  stats.mean_length = total_length / stats.file_count;
  stats.mean_unique = total_unique / stats.file_count;
  return stats;
}

}  // namespace structok::tokenizer
