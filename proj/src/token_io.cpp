#include "structok/token_io.h"

#include <charconv>
#include <sstream>

#include "structok/error.h"
#include "structok/util.h"

namespace structok::tokenizer {

namespace {

constexpr char kMagic[4] = {'S', 'T', 'O', 'K'};
constexpr uint8_t kBinaryVersion = 1;

TokenFamily familyFromName(const std::string& name, int line_no) {
  if (name == "NOTE_ON") return TokenFamily::NoteOn;
  if (name == "NOTE_OFF") return TokenFamily::NoteOff;
  if (name == "TIME_SHIFT") return TokenFamily::TimeShift;
  if (name == "VELOCITY") return TokenFamily::Velocity;
  if (name == "DURATION") return TokenFamily::Duration;
  throw Error(ErrorCode::MalformedInput,
              "line " + std::to_string(line_no) + ": unknown token family '" +
                  name + "'");
}

std::string trimmed(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

std::string toTokenText(const TokenSequence& seq) {
  const Vocabulary& vocab = Vocabulary::forKind(seq.kind);
  std::ostringstream out;
  for (uint16_t id : seq.ids) {
    TokenRef ref = vocab.refOf(id);
    out << familyName(ref.family) << '<' << ref.index << ">\n";
  }
  return out.str();
}

void writeTokenTextFile(const TokenSequence& seq,
                        const std::filesystem::path& path) {
  writeTextFile(path, toTokenText(seq));
}

TokenSequence fromTokenText(const std::string& text,
                            std::optional<RepresentationKind> kind,
                            std::string source_id) {
  std::vector<TokenRef> refs;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool saw_duration = false;
  bool saw_note_off = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trimmed(line);
    if (t.empty()) continue;
    auto open = t.find('<');
    auto close = t.rfind('>');
    if (open == std::string::npos || close == std::string::npos || close < open)
      throw Error(ErrorCode::MalformedInput,
                  "line " + std::to_string(line_no) + ": expected FAMILY<index>");
    TokenFamily family = familyFromName(t.substr(0, open), line_no);
    int index = 0;
    const char* first = t.data() + open + 1;
    const char* last = t.data() + close;
    auto [ptr, ec] = std::from_chars(first, last, index);
    if (ec != std::errc() || ptr != last)
      throw Error(ErrorCode::MalformedInput,
                  "line " + std::to_string(line_no) + ": bad index");
    saw_duration |= family == TokenFamily::Duration;
    saw_note_off |= family == TokenFamily::NoteOff;
    refs.push_back({family, index});
  }
  if (saw_duration && saw_note_off)
    throw Error(ErrorCode::MalformedInput,
                "text mixes DURATION and NOTE_OFF tokens");
  RepresentationKind resolved =
      kind.value_or(saw_duration ? RepresentationKind::ExplicitDuration
                                 : RepresentationKind::OnOff);

  const Vocabulary& vocab = Vocabulary::forKind(resolved);
  TokenSequence seq;
  seq.kind = resolved;
  seq.source_id = std::move(source_id);
  seq.ids.reserve(refs.size());
  for (const TokenRef& ref : refs)
    seq.ids.push_back(vocab.idFor(ref.family, ref.index));
  return seq;
}

TokenSequence readTokenTextFile(const std::filesystem::path& path,
                                std::optional<RepresentationKind> kind) {
  return fromTokenText(readTextFile(path), kind, path.string());
}

std::vector<uint8_t> toTokenBinary(const TokenSequence& seq) {
  std::vector<uint8_t> out;
  out.reserve(6 + seq.ids.size() * 2);
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(kBinaryVersion);
  out.push_back(static_cast<uint8_t>(seq.kind));
  for (uint16_t id : seq.ids) {
    out.push_back(static_cast<uint8_t>(id & 0xFF));
    out.push_back(static_cast<uint8_t>(id >> 8));
  }
  return out;
}

TokenSequence fromTokenBinary(std::span<const uint8_t> bytes,
                              std::string source_id) {
  if (bytes.size() < 6 || !std::equal(kMagic, kMagic + 4, bytes.begin()))
    throw Error(ErrorCode::MalformedInput, "not a STOK token file");
  if (bytes[4] != kBinaryVersion)
    throw Error(ErrorCode::MalformedInput,
                "unsupported STOK version " + std::to_string(bytes[4]));
  if (bytes[5] > 1)
    throw Error(ErrorCode::MalformedInput, "unknown representation kind byte");
  if ((bytes.size() - 6) % 2 != 0)
    throw Error(ErrorCode::MalformedInput, "odd STOK payload length");

  TokenSequence seq;
  seq.kind = static_cast<RepresentationKind>(bytes[5]);
  seq.source_id = std::move(source_id);
  const Vocabulary& vocab = Vocabulary::forKind(seq.kind);
  seq.ids.reserve((bytes.size() - 6) / 2);
  for (std::size_t i = 6; i + 1 < bytes.size(); i += 2) {
    auto id = static_cast<uint16_t>(bytes[i] | bytes[i + 1] << 8);
    if (!vocab.contains(id))
      throw Error(ErrorCode::MalformedInput,
                  "token id out of range: " + std::to_string(id));
    seq.ids.push_back(id);
  }
  return seq;
}

void writeTokenBinaryFile(const TokenSequence& seq,
                          const std::filesystem::path& path) {
  writeBinaryFile(path, toTokenBinary(seq));
}

TokenSequence readTokenBinaryFile(const std::filesystem::path& path) {
  auto bytes = readBinaryFile(path);
  return fromTokenBinary(bytes, path.string());
}

}  // namespace structok::tokenizer
