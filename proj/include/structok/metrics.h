// Structural quality metrics: pitch class entropy and consistency, and the
// chroma / self-similarity front-end feeding the fitness scape plot.

#ifndef STRUCTOK_METRICS_H_
#define STRUCTOK_METRICS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "structok/smf.h"

namespace structok::metrics {

inline constexpr double kDefaultFrameRate = 10.0;      // chroma frames/second
inline constexpr int kDefaultConsistencyWindows = 10;  // equal-duration windows
inline constexpr double kConsistencyEpsilon = 1e-6;    // additive smoothing

// 12 non-negative reals summing to 1, or all-zero for empty input.
struct PitchClassHistogram {
  std::array<double, 12> p{};

  bool isZero() const;
};

// Onset-count-weighted histogram over pitch mod 12.
PitchClassHistogram pitchClassHistogram(const smf::NoteList& notes);

// Shannon entropy in bits; 0 for the all-zero histogram.
double pitchClassEntropy(const PitchClassHistogram& hist);

// Mean KL divergence (bits, p_t || p_{t+1}) between consecutive equal-duration
// windows, each histogram smoothed with kConsistencyEpsilon. Lower means more
// consistent tonality. Throws InsufficientContent when fewer than two windows
// contain a note onset.
double pitchClassConsistency(const smf::NoteList& notes,
                             int windows = kDefaultConsistencyWindows);

// Per-frame pitch-class activity; each frame counts the notes sounding
// during it and is L2-normalized (silent frames stay zero).
struct Chromagram {
  double frame_rate = kDefaultFrameRate;
  std::vector<std::array<float, 12>> frames;
};

Chromagram chromagram(const smf::NoteList& notes,
                      double frame_rate = kDefaultFrameRate);

// Self-similarity matrix over chroma frames. Raw values are cosine
// similarities in [0,1]; after enhanceSsm values live in [penalty, 1].
struct Ssm {
  int n = 0;
  double frame_rate = kDefaultFrameRate;
  std::vector<float> values;  // row-major n*n

  float at(int i, int j) const { return values[static_cast<std::size_t>(i) * n + j]; }
  float& at(int i, int j) { return values[static_cast<std::size_t>(i) * n + j]; }
};

Ssm computeSsm(const Chromagram& chroma);

struct EnhanceParams {
  double smooth_s = 2.0;       // diagonal moving-average window
  double keep_fraction = 0.2;  // fraction of cells kept after thresholding
  double penalty = -2.0;       // value assigned to dropped cells
};

// Diagonal forward+backward smoothing, relative thresholding (only positive
// cells at or above the keep quantile survive), and min-max rescaling of the
// surviving cells to [0,1]. A constant positive matrix rescales to all-ones.
Ssm enhanceSsm(const Ssm& ssm, const EnhanceParams& params = {});

// Per-piece metric values; cells are empty when the piece cannot support the
// metric (too short for a band, too few windows, no notes).
struct MetricReport {
  std::string piece_id;
  int note_count = 0;
  double duration_s = 0.0;
  int anomalies = 0;
  std::optional<double> si_short;
  std::optional<double> si_mid;
  std::optional<double> si_long;
  std::optional<double> entropy;
  std::optional<double> consistency;
  std::optional<double> compression_ratio;
};

struct MetricParams {
  double frame_rate = kDefaultFrameRate;
  int consistency_windows = kDefaultConsistencyWindows;
  EnhanceParams enhance;
  double si_short_low_s = 3.0;   // short band [3, 8) seconds
  double si_mid_low_s = 8.0;     // medium band [8, 15)
  double si_long_low_s = 15.0;   // long band [15, inf)
  double cr_grid_s = 0.05;       // compression-ratio onset grid
  bool scape_exact = false;
  double scape_work_budget = 1.5e9;
  int workers = 0;
};

MetricReport computeMetricReport(const smf::NoteList& notes,
                                 const std::string& piece_id,
                                 const MetricParams& params = {});

}  // namespace structok::metrics

#endif  // STRUCTOK_METRICS_H_
