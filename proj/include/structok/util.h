// Small shared helpers: deterministic seed derivation, chunked parallel
// loops, and whole-file IO.

#ifndef STRUCTOK_UTIL_H_
#define STRUCTOK_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace structok {

// SplitMix64 step; the standard mixer for deriving independent sub-seeds
// from one master seed. derivedSeed(seed, a, b) is collision-resistant for
// the (a, b) index pairs used by the harness and bootstrap.
uint64_t splitmix64(uint64_t x);
uint64_t derivedSeed(uint64_t seed, uint64_t stream, uint64_t index = 0);

// Runs fn(i) for i in [0, count) on up to `workers` threads (0 = hardware
// concurrency). Work is split into contiguous chunks so callers that write
// to preallocated slot i get results independent of scheduling.
void parallelFor(std::size_t count, int workers,
                 const std::function<void(std::size_t)>& fn);

std::vector<uint8_t> readBinaryFile(const std::filesystem::path& path);
void writeBinaryFile(const std::filesystem::path& path,
                     const std::vector<uint8_t>& bytes);
std::string readTextFile(const std::filesystem::path& path);
void writeTextFile(const std::filesystem::path& path, const std::string& text);

}  // namespace structok

#endif  // STRUCTOK_UTIL_H_
