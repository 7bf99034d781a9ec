#include "structok/smf.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

#include "structok/error.h"
#include "structok/util.h"

namespace structok::smf {

namespace {

constexpr uint32_t kDefaultTempo = 500000;  // 120 bpm

struct ByteReader {
  std::span<const uint8_t> bytes;
  std::size_t pos = 0;

  bool atEnd() const { return pos >= bytes.size(); }
  std::size_t remaining() const { return bytes.size() - pos; }

  uint8_t u8() {
    if (atEnd()) throw Error(ErrorCode::UnexpectedEof, "unexpected end of file");
    return bytes[pos++];
  }
  uint8_t peek() const {
    if (atEnd()) throw Error(ErrorCode::UnexpectedEof, "unexpected end of file");
    return bytes[pos];
  }
  uint16_t u16be() { return static_cast<uint16_t>(u8() << 8 | u8()); }
  uint32_t u32be() {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = v << 8 | u8();
    return v;
  }
  std::span<const uint8_t> take(std::size_t n) {
    if (remaining() < n)
      throw Error(ErrorCode::UnexpectedEof, "truncated chunk");
    auto s = bytes.subspan(pos, n);
    pos += n;
    return s;
  }
};

void appendU16be(uint16_t v, std::vector<uint8_t>& out) {
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v & 0xFF));
}

void appendU32be(uint32_t v, std::vector<uint8_t>& out) {
  for (int shift = 24; shift >= 0; shift -= 8)
    out.push_back(static_cast<uint8_t>(v >> shift & 0xFF));
}

bool isEndOfTrack(const TimedEvent& e) {
  return e.kind == EventKind::OtherMeta && e.status == 0x2F;
}

TimedEvent makeEndOfTrack(uint32_t delta) {
  TimedEvent e;
  e.delta_ticks = delta;
  e.kind = EventKind::OtherMeta;
  e.status = 0x2F;
  return e;
}

int channelDataBytes(uint8_t status) {
  switch (status & 0xF0) {
    case 0xC0:
    case 0xD0:
      return 1;
    default:
      return 2;
  }
}

EventTrack parseTrack(std::span<const uint8_t> data) {
  EventTrack track;
  ByteReader r{data};
  uint8_t running_status = 0;
  while (!r.atEnd()) {
    TimedEvent event;
    std::size_t vlq_len = 0;
    event.delta_ticks = readVlq(data.subspan(r.pos), vlq_len);
    r.pos += vlq_len;

    uint8_t status = r.peek();
    if (status < 0x80) {
      if (running_status == 0)
        throw Error(ErrorCode::MalformedInput,
                    "data byte without running status");
      status = running_status;
    } else {
      r.u8();
    }

    if (status == 0xFF) {
      running_status = 0;
      uint8_t meta_type = r.u8();
      std::size_t len_len = 0;
      uint32_t len = readVlq(r.bytes.subspan(r.pos), len_len);
      r.pos += len_len;
      auto payload = r.take(len);
      if (meta_type == 0x2F) {
        track.events.push_back(makeEndOfTrack(event.delta_ticks));
        return track;  // remainder of the chunk is ignored
      }
      uint32_t tempo = 0;
      if (meta_type == 0x51 && len == 3)
        tempo = static_cast<uint32_t>(payload[0]) << 16 |
                static_cast<uint32_t>(payload[1]) << 8 | payload[2];
      if (tempo > 0) {
        event.kind = EventKind::Tempo;
        event.tempo_us_per_quarter = tempo;
      } else {
        event.kind = EventKind::OtherMeta;
        event.status = meta_type;
        event.payload.assign(payload.begin(), payload.end());
      }
    } else if (status == 0xF0 || status == 0xF7) {
      running_status = 0;
      std::size_t len_len = 0;
      uint32_t len = readVlq(r.bytes.subspan(r.pos), len_len);
      r.pos += len_len;
      auto payload = r.take(len);
      event.kind = EventKind::OtherChannel;
      event.status = status;
      event.payload.assign(payload.begin(), payload.end());
    } else if (status >= 0x80) {
      running_status = status;
      event.channel = status & 0x0F;
      int n_data = channelDataBytes(status);
      uint8_t d0 = r.u8();
      uint8_t d1 = n_data == 2 ? r.u8() : 0;
      if (d0 > 0x7F || d1 > 0x7F)
        throw Error(ErrorCode::MalformedInput, "data byte out of range");
      switch (status & 0xF0) {
        case 0x90:
          event.pitch = d0;
          event.velocity = d1;
          event.kind = d1 > 0 ? EventKind::NoteOn : EventKind::NoteOff;
          break;
        case 0x80:
          event.kind = EventKind::NoteOff;
          event.pitch = d0;
          event.velocity = d1;
          break;
        case 0xC0:
          event.kind = EventKind::ProgramChange;
          event.program = d0;
          break;
        default:
          event.kind = EventKind::OtherChannel;
          event.status = status;
          event.payload = n_data == 2 ? std::vector<uint8_t>{d0, d1}
                                      : std::vector<uint8_t>{d0};
          break;
      }
    }
    track.events.push_back(std::move(event));
  }
  // Files in the wild sometimes omit End-of-Track; normalize.
  track.events.push_back(makeEndOfTrack(0));
  return track;
}

void writeEvent(const TimedEvent& e, std::vector<uint8_t>& out) {
  writeVlq(e.delta_ticks, out);
  switch (e.kind) {
    case EventKind::NoteOn:
      out.push_back(static_cast<uint8_t>(0x90 | (e.channel & 0x0F)));
      out.push_back(e.pitch & 0x7F);
      out.push_back(std::max<uint8_t>(1, e.velocity) & 0x7F);
      break;
    case EventKind::NoteOff:
      out.push_back(static_cast<uint8_t>(0x80 | (e.channel & 0x0F)));
      out.push_back(e.pitch & 0x7F);
      out.push_back(e.velocity & 0x7F);
      break;
    case EventKind::Tempo:
      out.push_back(0xFF);
      out.push_back(0x51);
      out.push_back(0x03);
      out.push_back(static_cast<uint8_t>(e.tempo_us_per_quarter >> 16 & 0xFF));
      out.push_back(static_cast<uint8_t>(e.tempo_us_per_quarter >> 8 & 0xFF));
      out.push_back(static_cast<uint8_t>(e.tempo_us_per_quarter & 0xFF));
      break;
    case EventKind::ProgramChange:
      out.push_back(static_cast<uint8_t>(0xC0 | (e.channel & 0x0F)));
      out.push_back(e.program & 0x7F);
      break;
    case EventKind::OtherMeta:
      out.push_back(0xFF);
      out.push_back(e.status);
      writeVlq(static_cast<uint32_t>(e.payload.size()), out);
      out.insert(out.end(), e.payload.begin(), e.payload.end());
      break;
    case EventKind::OtherChannel:
      out.push_back(e.status);
      if (e.status == 0xF0 || e.status == 0xF7)
        writeVlq(static_cast<uint32_t>(e.payload.size()), out);
      out.insert(out.end(), e.payload.begin(), e.payload.end());
      break;
  }
}

// Walks a tempo map in tick order; ticks fed to seconds() must be
// non-decreasing per cursor instance.
class TempoCursor {
 public:
  TempoCursor(const TempoMap& map, int ppq) : map_(map), ppq_(ppq) {}

  double seconds(int64_t tick) {
    while (index_ + 1 < map_.points.size() &&
           map_.points[index_ + 1].tick <= tick) {
      const auto& cur = map_.points[index_];
      const auto& next = map_.points[index_ + 1];
      base_us_ += static_cast<double>(next.tick - cur.tick) *
                  static_cast<double>(cur.us_per_quarter);
      ++index_;
    }
    const auto& cur = map_.points[index_];
    double us = base_us_ + static_cast<double>(tick - cur.tick) *
                               static_cast<double>(cur.us_per_quarter);
    return us / (static_cast<double>(ppq_) * 1e6);
  }

 private:
  const TempoMap& map_;
  int ppq_;
  std::size_t index_ = 0;
  double base_us_ = 0.0;
};

}  // namespace

bool noteLess(const Note& a, const Note& b) {
  if (a.onset_s != b.onset_s) return a.onset_s < b.onset_s;
  if (a.pitch != b.pitch) return a.pitch < b.pitch;
  if (a.duration_s != b.duration_s) return a.duration_s < b.duration_s;
  return a.velocity < b.velocity;
}

uint32_t readVlq(std::span<const uint8_t> bytes, std::size_t& consumed) {
  uint32_t value = 0;
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    if (i >= 4)
      throw Error(ErrorCode::MalformedVlq, "VLQ longer than 4 bytes");
    value = value << 7 | (bytes[i] & 0x7F);
    if ((bytes[i] & 0x80) == 0) {
      consumed = i + 1;
      return value;
    }
  }
  throw Error(ErrorCode::UnexpectedEof, "stream ended inside VLQ");
}

void writeVlq(uint32_t value, std::vector<uint8_t>& out) {
  uint8_t buf[4];
  int n = 0;
  do {
    buf[n++] = static_cast<uint8_t>(value & 0x7F);
    value >>= 7;
  } while (value > 0 && n < 4);
  for (int i = n - 1; i >= 0; --i)
    out.push_back(i == 0 ? buf[i] : static_cast<uint8_t>(buf[i] | 0x80));
}

MidiDocument parseSmf(std::span<const uint8_t> bytes) {
  ByteReader r{bytes};
  auto id = r.take(4);
  if (!std::equal(id.begin(), id.end(), "MThd"))
    throw Error(ErrorCode::MalformedInput, "missing MThd header");
  uint32_t header_len = r.u32be();
  if (header_len < 6)
    throw Error(ErrorCode::MalformedInput, "short MThd header");
  uint16_t format = r.u16be();
  uint16_t n_tracks = r.u16be();
  uint16_t division = r.u16be();
  r.take(header_len - 6);  // tolerate oversized headers
  if (format > 1)
    throw Error(ErrorCode::UnsupportedFormat,
                "unsupported SMF format " + std::to_string(format));
  if (division & 0x8000)
    throw Error(ErrorCode::UnsupportedDivision, "SMPTE division not supported");
  if (division == 0)
    throw Error(ErrorCode::MalformedInput, "zero ticks-per-quarter");

  MidiDocument doc;
  doc.format = format;
  doc.ticks_per_quarter = division;
  while (doc.tracks.size() < n_tracks) {
    auto chunk_id = r.take(4);
    uint32_t chunk_len = r.u32be();
    auto chunk = r.take(chunk_len);
    if (std::equal(chunk_id.begin(), chunk_id.end(), "MTrk"))
      doc.tracks.push_back(parseTrack(chunk));
    // other chunk ids are skipped by their declared length
  }
  return doc;
}

std::vector<uint8_t> writeSmf(const MidiDocument& doc) {
  std::vector<uint8_t> out;
  out.reserve(1024);
  out.insert(out.end(), {'M', 'T', 'h', 'd'});
  appendU32be(6, out);
  appendU16be(static_cast<uint16_t>(doc.format), out);
  appendU16be(static_cast<uint16_t>(doc.tracks.size()), out);
  appendU16be(static_cast<uint16_t>(doc.ticks_per_quarter), out);
  for (const auto& track : doc.tracks) {
    std::vector<uint8_t> body;
    bool has_eot = false;
    for (const auto& event : track.events) {
      writeEvent(event, body);
      if (isEndOfTrack(event)) {
        has_eot = true;
        break;
      }
    }
    if (!has_eot) writeEvent(makeEndOfTrack(0), body);
    out.insert(out.end(), {'M', 'T', 'r', 'k'});
    appendU32be(static_cast<uint32_t>(body.size()), out);
    out.insert(out.end(), body.begin(), body.end());
  }
  return out;
}

TempoMap buildTempoMap(const MidiDocument& doc) {
  std::map<int64_t, uint32_t> by_tick;
  for (const auto& track : doc.tracks) {
    int64_t tick = 0;
    for (const auto& event : track.events) {
      tick += event.delta_ticks;
      if (event.kind == EventKind::Tempo)
        by_tick[tick] = event.tempo_us_per_quarter;  // last writer wins
    }
  }
  if (!by_tick.count(0)) by_tick[0] = kDefaultTempo;
  TempoMap map;
  map.points.reserve(by_tick.size());
  for (auto [tick, us] : by_tick) map.points.push_back({tick, us});
  return map;
}

double ticksToSeconds(int64_t tick, const TempoMap& map, int ticks_per_quarter) {
  TempoCursor cursor(map, ticks_per_quarter);
  return cursor.seconds(tick);
}

NoteList extractNotes(const MidiDocument& doc) {
  TempoMap tempo = buildTempoMap(doc);
  struct OpenNote {
    double onset_s;
    uint8_t velocity;
  };

  NoteList result;
  double final_time = 0.0;
  struct Pending {
    double onset_s;
    uint8_t pitch;
    uint8_t velocity;
  };
  std::vector<Pending> open_at_end;

  for (const auto& track : doc.tracks) {
    TempoCursor cursor(tempo, doc.ticks_per_quarter);
    std::deque<OpenNote> open[16][128] = {};
    int64_t tick = 0;
    double time_s = 0.0;
    for (const auto& event : track.events) {
      tick += event.delta_ticks;
      time_s = cursor.seconds(tick);
      if (event.channel == 9 &&
          (event.kind == EventKind::NoteOn || event.kind == EventKind::NoteOff))
        continue;  // percussion
      if (event.kind == EventKind::NoteOn) {
        open[event.channel][event.pitch].push_back(
            {time_s, std::max<uint8_t>(1, event.velocity)});
      } else if (event.kind == EventKind::NoteOff) {
        auto& queue = open[event.channel][event.pitch];
        if (queue.empty()) {
          ++result.warnings;  // orphan note-off
          continue;
        }
        OpenNote note = queue.front();
        queue.pop_front();
        double duration = time_s - note.onset_s;
        if (duration > 0.0)
          result.notes.push_back(
              {note.onset_s, duration, event.pitch, note.velocity});
        else
          ++result.warnings;  // zero-length note dropped
      }
    }
    final_time = std::max(final_time, time_s);
    for (int ch = 0; ch < 16; ++ch)
      for (int pitch = 0; pitch < 128; ++pitch)
        for (const auto& note : open[ch][pitch])
          open_at_end.push_back({note.onset_s, static_cast<uint8_t>(pitch),
                                 note.velocity});
  }

  for (const auto& pending : open_at_end) {
    ++result.warnings;  // note-on without matching note-off
    double duration = final_time - pending.onset_s;
    if (duration > 0.0)
      result.notes.push_back(
          {pending.onset_s, duration, pending.pitch, pending.velocity});
  }

  std::sort(result.notes.begin(), result.notes.end(), noteLess);
  result.total_duration_s = final_time;
  return result;
}

MidiDocument notesToDocument(const NoteList& notes, int ticks_per_quarter,
                             uint32_t us_per_quarter) {
  MidiDocument doc;
  doc.format = 1;
  doc.ticks_per_quarter = ticks_per_quarter;

  EventTrack tempo_track;
  TimedEvent tempo;
  tempo.kind = EventKind::Tempo;
  tempo.tempo_us_per_quarter = us_per_quarter;
  tempo_track.events.push_back(tempo);
  tempo_track.events.push_back(makeEndOfTrack(0));
  doc.tracks.push_back(std::move(tempo_track));

  struct Edge {
    int64_t tick;
    bool is_on;
    uint8_t pitch;
    uint8_t velocity;
  };
  double ticks_per_second =
      static_cast<double>(ticks_per_quarter) * 1e6 / us_per_quarter;
  std::vector<Edge> edges;
  edges.reserve(notes.notes.size() * 2);
  for (const auto& note : notes.notes) {
    auto on_tick = static_cast<int64_t>(std::llround(note.onset_s * ticks_per_second));
    auto off_tick = static_cast<int64_t>(
        std::llround((note.onset_s + note.duration_s) * ticks_per_second));
    if (off_tick <= on_tick) off_tick = on_tick + 1;
    edges.push_back({on_tick, true, note.pitch, note.velocity});
    edges.push_back({off_tick, false, note.pitch, 0});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    if (a.tick != b.tick) return a.tick < b.tick;
    if (a.is_on != b.is_on) return !a.is_on;  // offs first
    return a.pitch < b.pitch;
  });

  EventTrack note_track;
  TimedEvent program;
  program.kind = EventKind::ProgramChange;
  program.program = 0;
  note_track.events.push_back(program);
  int64_t prev_tick = 0;
  for (const auto& edge : edges) {
    TimedEvent event;
    event.delta_ticks = static_cast<uint32_t>(edge.tick - prev_tick);
    event.kind = edge.is_on ? EventKind::NoteOn : EventKind::NoteOff;
    event.pitch = edge.pitch;
    event.velocity = edge.velocity;
    note_track.events.push_back(std::move(event));
    prev_tick = edge.tick;
  }
  note_track.events.push_back(makeEndOfTrack(0));
  doc.tracks.push_back(std::move(note_track));
  return doc;
}

MidiDocument parseSmfFile(const std::filesystem::path& path) {
  auto bytes = readBinaryFile(path);
  return parseSmf(bytes);
}

void writeSmfFile(const MidiDocument& doc, const std::filesystem::path& path) {
  writeBinaryFile(path, writeSmf(doc));
}

}  // namespace structok::smf
