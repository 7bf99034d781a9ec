// Token file formats: human-diffable text (one FAMILY<index> per line) and
// the STOK binary format (magic + version + kind byte + 16-bit ids).

#ifndef STRUCTOK_TOKEN_IO_H_
#define STRUCTOK_TOKEN_IO_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "structok/tokenizer.h"

namespace structok::tokenizer {

std::string toTokenText(const TokenSequence& seq);
void writeTokenTextFile(const TokenSequence& seq,
                        const std::filesystem::path& path);

// Parses token text. When `kind` is empty the representation is inferred
// from the families present (DURATION -> explicit, NOTE_OFF -> onoff);
// a sequence with neither defaults to onoff.
TokenSequence fromTokenText(const std::string& text,
                            std::optional<RepresentationKind> kind = {},
                            std::string source_id = "");
TokenSequence readTokenTextFile(const std::filesystem::path& path,
                                std::optional<RepresentationKind> kind = {});

std::vector<uint8_t> toTokenBinary(const TokenSequence& seq);
TokenSequence fromTokenBinary(std::span<const uint8_t> bytes,
                              std::string source_id = "");
void writeTokenBinaryFile(const TokenSequence& seq,
                          const std::filesystem::path& path);
TokenSequence readTokenBinaryFile(const std::filesystem::path& path);

}  // namespace structok::tokenizer

#endif  // STRUCTOK_TOKEN_IO_H_
