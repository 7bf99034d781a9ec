// Synthetic mini-corpus: deterministic, structured MIDI fixtures (AABA form,
// sustained bass and chords) for tests, demos and the example experiment.

#ifndef STRUCTOK_MINI_CORPUS_H_
#define STRUCTOK_MINI_CORPUS_H_

#include <cstdint>
#include <filesystem>

namespace structok {

inline constexpr uint64_t kMiniCorpusSeed = 0x5EEDC0DE;
inline constexpr int kMiniCorpusTrainFiles = 16;
inline constexpr int kMiniCorpusValidationFiles = 4;
inline constexpr int kMiniCorpusTestFiles = 10;

// Writes the 30-piece corpus plus manifest.json into `dir` (created if
// needed) and returns the manifest path. Output is byte-identical for a
// given seed.
std::filesystem::path writeMiniCorpus(const std::filesystem::path& dir,
                                      uint64_t seed = kMiniCorpusSeed);

}  // namespace structok

#endif  // STRUCTOK_MINI_CORPUS_H_
