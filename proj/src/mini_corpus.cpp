#include "structok/mini_corpus.h"

#include <algorithm>
#include <array>
#include <cstdio>
#include <random>
#include <vector>

#include "structok/manifest.h"
#include "structok/smf.h"
#include "structok/util.h"

namespace structok {

namespace {

constexpr int kPpq = 480;
constexpr int kPieces = kMiniCorpusTrainFiles + kMiniCorpusValidationFiles +
                        kMiniCorpusTestFiles;
constexpr int kBarsPerPhrase = 8;
constexpr int kBeatsPerBar = 4;

const std::array<int, 7> kMajorScale = {0, 2, 4, 5, 7, 9, 11};
const std::array<int, 7> kMinorScale = {0, 2, 3, 5, 7, 8, 10};

struct TickNote {
  int64_t tick;
  int dur;
  int pitch;
  int velocity;
};

int scalePitch(int root, bool minor, int degree) {
  const auto& scale = minor ? kMinorScale : kMajorScale;
  int octave = degree >= 0 ? degree / 7 : -((-degree + 6) / 7);
  int step = degree - octave * 7;
  return std::clamp(root + octave * 12 + scale[static_cast<std::size_t>(step)],
                    21, 108);
}

// One 8-bar phrase: eighth-note melody walking the scale, half-bar triads,
// and sustained whole-bar bass. Chords and bass overlap the melody so the
// explicit notation has something to win on.
std::vector<TickNote> makePhrase(std::mt19937_64& rng, int root, bool minor,
                                 int melody_degree) {
  std::vector<TickNote> notes;
  const int beat = kPpq;
  const int eighth = kPpq / 2;
  int degree = melody_degree;
  for (int bar = 0; bar < kBarsPerPhrase; ++bar) {
    int64_t bar_tick = static_cast<int64_t>(bar) * kBeatsPerBar * beat;
    // Bass: root or fifth, sustained for the whole bar.
    int bass_degree = (bar % 2 == 0) ? 0 : 4;
    notes.push_back({bar_tick, kBeatsPerBar * beat,
                     scalePitch(root - 24, minor, bass_degree), 56});
    // Chords: two triads per bar, each lasting two beats.
    for (int half = 0; half < 2; ++half) {
      int64_t chord_tick = bar_tick + half * 2 * beat;
      int chord_root = (bar + half) % 2 == 0 ? 0 : 3;
      for (int third = 0; third < 3; ++third)
        notes.push_back({chord_tick, 2 * beat,
                         scalePitch(root - 12, minor, chord_root + 2 * third),
                         48});
    }
    // Melody: eighth notes, small random walk clamped to two octaves.
    for (int step = 0; step < kBeatsPerBar * 2; ++step) {
      int64_t tick = bar_tick + static_cast<int64_t>(step) * eighth;
      int move = static_cast<int>(rng() % 5) - 2;  // -2..2
      degree = std::clamp(degree + move, 0, 14);
      int velocity = step == 0 ? 92 : 76;
      notes.push_back({tick, eighth, scalePitch(root, minor, degree), velocity});
    }
  }
  return notes;
}

smf::MidiDocument makePiece(uint64_t seed, int index) {
  std::mt19937_64 rng(derivedSeed(seed, 7, static_cast<uint64_t>(index)));
  int root = 55 + (index * 5) % 12;
  bool minor = index % 2 == 1;
  int bpm = 96 + (index % 5) * 12;
  uint32_t tempo = 60000000u / static_cast<uint32_t>(bpm);

  auto phrase_a = makePhrase(rng, root, minor, 4);
  auto phrase_b = makePhrase(rng, root + (minor ? 3 : 5), minor, 7);

  // AABA form.
  std::vector<TickNote> notes;
  int64_t phrase_ticks =
      static_cast<int64_t>(kBarsPerPhrase) * kBeatsPerBar * kPpq;
  const std::vector<TickNote>* phrases[4] = {&phrase_a, &phrase_a, &phrase_b,
                                             &phrase_a};
  for (int p = 0; p < 4; ++p)
    for (const auto& note : *phrases[p])
      notes.push_back({note.tick + p * phrase_ticks, note.dur, note.pitch,
                       note.velocity});

  smf::MidiDocument doc;
  doc.format = 1;
  doc.ticks_per_quarter = kPpq;

  smf::EventTrack tempo_track;
  smf::TimedEvent tempo_event;
  tempo_event.kind = smf::EventKind::Tempo;
  tempo_event.tempo_us_per_quarter = tempo;
  tempo_track.events.push_back(tempo_event);
  if (index % 3 == 0) {
    // A mid-piece tempo change keeps the tempo-map path honest.
    smf::TimedEvent change;
    change.kind = smf::EventKind::Tempo;
    change.delta_ticks = static_cast<uint32_t>(2 * phrase_ticks);
    change.tempo_us_per_quarter = tempo + tempo / 8;
    tempo_track.events.push_back(change);
  }
  smf::TimedEvent eot;
  eot.kind = smf::EventKind::OtherMeta;
  eot.status = 0x2F;
  tempo_track.events.push_back(eot);
  doc.tracks.push_back(std::move(tempo_track));

  struct Edge {
    int64_t tick;
    bool is_on;
    int pitch;
    int velocity;
  };
  std::vector<Edge> edges;
  edges.reserve(notes.size() * 2);
  for (const auto& note : notes) {
    edges.push_back({note.tick, true, note.pitch, note.velocity});
    edges.push_back({note.tick + note.dur, false, note.pitch, 0});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    if (a.tick != b.tick) return a.tick < b.tick;
    if (a.is_on != b.is_on) return !a.is_on;
    return a.pitch < b.pitch;
  });

  smf::EventTrack note_track;
  smf::TimedEvent program;
  program.kind = smf::EventKind::ProgramChange;
  note_track.events.push_back(program);
  int64_t prev = 0;
  for (const auto& edge : edges) {
    smf::TimedEvent event;
    event.delta_ticks = static_cast<uint32_t>(edge.tick - prev);
    event.kind = edge.is_on ? smf::EventKind::NoteOn : smf::EventKind::NoteOff;
    event.pitch = static_cast<uint8_t>(edge.pitch);
    event.velocity = static_cast<uint8_t>(edge.velocity);
    note_track.events.push_back(event);
    prev = edge.tick;
  }
  note_track.events.push_back(eot);
  doc.tracks.push_back(std::move(note_track));
  return doc;
}

}  // namespace

std::filesystem::path writeMiniCorpus(const std::filesystem::path& dir,
                                      uint64_t seed) {
  std::filesystem::create_directories(dir);
  DatasetManifest manifest;
  manifest.name = "mini";
  manifest.notes = "synthetic AABA fixtures";
  for (int i = 0; i < kPieces; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "mini_%03d.mid", i);
    auto path = dir / name;
    smf::writeSmfFile(makePiece(seed, i), path);
    Split split = i < kMiniCorpusTrainFiles ? Split::Train
                  : i < kMiniCorpusTrainFiles + kMiniCorpusValidationFiles
                      ? Split::Validation
                      : Split::Test;
    manifest.entries.push_back({path, split});
  }
  auto manifest_path = dir / "manifest.json";
  saveManifest(manifest, manifest_path);
  return manifest_path;
}

}  // namespace structok
