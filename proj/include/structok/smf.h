// Standard MIDI File reader/writer (formats 0 and 1, PPQ division only)
// and the preprocessing step that flattens a multi-track file into a
// single percussion-free note list with absolute times in seconds.

#ifndef STRUCTOK_SMF_H_
#define STRUCTOK_SMF_H_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace structok::smf {

enum class EventKind {
  NoteOn,
  NoteOff,
  Tempo,
  ProgramChange,
  OtherMeta,     // any meta event we carry through verbatim (incl. End-of-Track)
  OtherChannel,  // any other channel/sysex event carried through verbatim
};

struct TimedEvent {
  uint32_t delta_ticks = 0;
  EventKind kind = EventKind::OtherMeta;
  uint8_t channel = 0;   // channel events only
  uint8_t pitch = 0;     // NoteOn/NoteOff
  uint8_t velocity = 0;  // NoteOn/NoteOff
  uint8_t program = 0;   // ProgramChange
  uint32_t tempo_us_per_quarter = 0;  // Tempo
  // OtherMeta: meta type byte; OtherChannel: full status byte (0xA0..0xEF
  // data messages, or 0xF0/0xF7 sysex whose payload keeps its own length).
  uint8_t status = 0;
  std::vector<uint8_t> payload;

  bool operator==(const TimedEvent&) const = default;
};

struct EventTrack {
  std::vector<TimedEvent> events;  // last event is always End-of-Track

  bool operator==(const EventTrack&) const = default;
};

struct MidiDocument {
  int format = 1;               // 0 or 1
  int ticks_per_quarter = 480;  // PPQ; SMPTE division is rejected at parse
  std::vector<EventTrack> tracks;
};

struct TempoPoint {
  int64_t tick = 0;
  uint32_t us_per_quarter = 500000;

  bool operator==(const TempoPoint&) const = default;
};

// Tick-sorted tempo changes; always has an entry at tick 0.
struct TempoMap {
  std::vector<TempoPoint> points;
};

struct Note {
  double onset_s = 0.0;
  double duration_s = 0.0;
  uint8_t pitch = 0;
  uint8_t velocity = 64;

  bool operator==(const Note&) const = default;
};

// Canonical note ordering: (onset_s, pitch), then duration and velocity as
// deterministic tie-breakers.
bool noteLess(const Note& a, const Note& b);

struct NoteList {
  std::vector<Note> notes;  // sorted by (onset_s, pitch)
  double total_duration_s = 0.0;
  int warnings = 0;  // extraction anomalies (orphan note-offs, dropped notes)
};

// Reads one variable-length quantity (at most 4 bytes). `consumed` receives
// the number of bytes used. Throws MalformedVlq / UnexpectedEof.
uint32_t readVlq(std::span<const uint8_t> bytes, std::size_t& consumed);

// Appends the canonical (shortest-form) VLQ encoding of value (< 2^28).
void writeVlq(uint32_t value, std::vector<uint8_t>& out);

// Parses a complete SMF byte buffer. NoteOn with velocity 0 is normalized to
// NoteOff. Unknown chunks are skipped by their declared length. Throws
// UnsupportedDivision, UnsupportedFormat, UnexpectedEof, MalformedInput.
MidiDocument parseSmf(std::span<const uint8_t> bytes);

// Serializes a document. parseSmf(writeSmf(doc)) reproduces doc (the writer
// never uses running status, so byte output is canonical).
std::vector<uint8_t> writeSmf(const MidiDocument& doc);

// Merged tempo events from all tracks; implicit 120 bpm at tick 0 when a
// file sets none; later events override earlier ones on duplicate ticks.
TempoMap buildTempoMap(const MidiDocument& doc);

// Piecewise-linear tick -> seconds conversion under a tempo map.
double ticksToSeconds(int64_t tick, const TempoMap& map, int ticks_per_quarter);

// Drops channel 9 (percussion), pairs NoteOn/NoteOff FIFO per (channel,
// pitch), closes unmatched NoteOns at the final event time, and merges all
// tracks into one sorted note list. Lenient: anomalies are tallied in
// NoteList::warnings, never thrown.
NoteList extractNotes(const MidiDocument& doc);

// Builds a writable document from a plain note list: format 1 with a tempo
// track plus one merged note track, all notes on channel 0, program 0. The
// 500 PPQ / 120 bpm default puts the tokenizer's 10 ms grid on exact ticks.
MidiDocument notesToDocument(const NoteList& notes, int ticks_per_quarter = 500,
                             uint32_t us_per_quarter = 500000);

MidiDocument parseSmfFile(const std::filesystem::path& path);
void writeSmfFile(const MidiDocument& doc, const std::filesystem::path& path);

}  // namespace structok::smf

#endif  // STRUCTOK_SMF_H_
