#include "structok/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "structok/cosiatec.h"
#include "structok/error.h"
#include "structok/scape.h"

namespace structok::metrics {

namespace {

std::array<double, 12> smoothed(const std::array<double, 12>& p) {
  double total = 0.0;
  for (double v : p) total += v;
  std::array<double, 12> q;
  double denom = total + 12.0 * kConsistencyEpsilon;
  for (int i = 0; i < 12; ++i) q[i] = (p[i] + kConsistencyEpsilon) / denom;
  return q;
}

double klDivergenceBits(const std::array<double, 12>& p,
                        const std::array<double, 12>& q) {
  double kl = 0.0;
  for (int i = 0; i < 12; ++i)
    if (p[i] > 0.0) kl += p[i] * std::log2(p[i] / q[i]);
  return kl;
}

}  // namespace

bool PitchClassHistogram::isZero() const {
  for (double v : p)
    if (v != 0.0) return false;
  return true;
}

PitchClassHistogram pitchClassHistogram(const smf::NoteList& notes) {
  PitchClassHistogram hist;
  if (notes.notes.empty()) return hist;
  for (const auto& note : notes.notes) hist.p[note.pitch % 12] += 1.0;
  double total = static_cast<double>(notes.notes.size());
  for (double& v : hist.p) v /= total;
  return hist;
}

double pitchClassEntropy(const PitchClassHistogram& hist) {
  double entropy = 0.0;
  for (double v : hist.p)
    if (v > 0.0) entropy -= v * std::log2(v);
  return entropy;
}

double pitchClassConsistency(const smf::NoteList& notes, int windows) {
  if (windows < 2)
    throw Error(ErrorCode::InvalidArgument, "consistency needs >= 2 windows");
  double total = notes.total_duration_s;
  if (total <= 0.0 || notes.notes.empty())
    throw Error(ErrorCode::InsufficientContent, "piece has no timed content");

  std::vector<std::array<double, 12>> counts(
      static_cast<std::size_t>(windows), std::array<double, 12>{});
  std::vector<int> onsets_per_window(static_cast<std::size_t>(windows), 0);
  double width = total / windows;
  for (const auto& note : notes.notes) {
    int w = std::min(windows - 1, static_cast<int>(note.onset_s / width));
    counts[w][note.pitch % 12] += 1.0;
    ++onsets_per_window[w];
  }
  int non_empty = 0;
  for (int count : onsets_per_window)
    if (count > 0) ++non_empty;
  if (non_empty < 2)
    throw Error(ErrorCode::InsufficientContent,
                "fewer than two windows contain onsets");

  double sum = 0.0;
  for (int w = 0; w + 1 < windows; ++w)
    sum += klDivergenceBits(smoothed(counts[w]), smoothed(counts[w + 1]));
  return sum / (windows - 1);
}

Chromagram chromagram(const smf::NoteList& notes, double frame_rate) {
  if (frame_rate <= 0.0)
    throw Error(ErrorCode::InvalidArgument, "frame rate must be positive");
  Chromagram chroma;
  chroma.frame_rate = frame_rate;
  double total = notes.total_duration_s;
  auto n_frames =
      static_cast<std::size_t>(std::max(0.0, std::ceil(total * frame_rate - 1e-9)));
  chroma.frames.assign(n_frames, std::array<float, 12>{});
  if (n_frames == 0) return chroma;

  for (const auto& note : notes.notes) {
    double end = note.onset_s + note.duration_s;
    auto first = static_cast<int64_t>(std::floor(note.onset_s * frame_rate));
    auto last = static_cast<int64_t>(std::ceil(end * frame_rate)) - 1;
    first = std::max<int64_t>(0, first);
    last = std::min<int64_t>(static_cast<int64_t>(n_frames) - 1, last);
    for (int64_t f = first; f <= last; ++f)
      chroma.frames[static_cast<std::size_t>(f)][note.pitch % 12] += 1.0f;
  }
  for (auto& frame : chroma.frames) {
    double norm_sq = 0.0;
    for (float v : frame) norm_sq += static_cast<double>(v) * v;
    if (norm_sq > 0.0) {
      auto inv = static_cast<float>(1.0 / std::sqrt(norm_sq));
      for (float& v : frame) v *= inv;
    }
  }
  return chroma;
}

Ssm computeSsm(const Chromagram& chroma) {
  Ssm ssm;
  ssm.n = static_cast<int>(chroma.frames.size());
  ssm.frame_rate = chroma.frame_rate;
  ssm.values.assign(static_cast<std::size_t>(ssm.n) * ssm.n, 0.0f);
  for (int i = 0; i < ssm.n; ++i) {
    const auto& fi = chroma.frames[i];
    bool zero_i = true;
    for (float v : fi) zero_i &= v == 0.0f;
    for (int j = i; j < ssm.n; ++j) {
      float dot = 0.0f;
      const auto& fj = chroma.frames[j];
      for (int k = 0; k < 12; ++k) dot += fi[k] * fj[k];
      dot = std::clamp(dot, 0.0f, 1.0f);
      if (i == j) dot = zero_i ? 0.0f : 1.0f;
      ssm.at(i, j) = dot;
      ssm.at(j, i) = dot;
    }
  }
  return ssm;
}

Ssm enhanceSsm(const Ssm& ssm, const EnhanceParams& params) {
  const int n = ssm.n;
  Ssm out;
  out.n = n;
  out.frame_rate = ssm.frame_rate;
  out.values.assign(static_cast<std::size_t>(n) * n, 0.0f);
  if (n == 0) return out;

  int window = std::max(1, static_cast<int>(std::lround(
                               params.smooth_s * ssm.frame_rate)));

  // Per-diagonal prefix sums give both directional moving averages in one
  // pass over each diagonal.
  std::vector<double> prefix;
  for (int d = -(n - 1); d <= n - 1; ++d) {
    int i0 = std::max(0, d);
    int j0 = std::max(0, -d);
    int len = n - std::max(i0, j0);
    prefix.assign(static_cast<std::size_t>(len) + 1, 0.0);
    for (int k = 0; k < len; ++k)
      prefix[k + 1] = prefix[k] + ssm.at(i0 + k, j0 + k);
    for (int k = 0; k < len; ++k) {
      int fwd_end = std::min(len, k + window);
      int bwd_begin = std::max(0, k - window + 1);
      double fwd = (prefix[fwd_end] - prefix[k]) / (fwd_end - k);
      double bwd = (prefix[k + 1] - prefix[bwd_begin]) / (k + 1 - bwd_begin);
      out.at(i0 + k, j0 + k) = static_cast<float>(0.5 * (fwd + bwd));
    }
  }

  // Relative threshold: keep the top keep_fraction of cells, but never a
  // non-positive cell; rescale survivors to [0,1].
  std::vector<float> sorted(out.values);
  auto keep_rank = static_cast<std::size_t>(
      std::clamp((1.0 - params.keep_fraction) * static_cast<double>(sorted.size()),
                 0.0, static_cast<double>(sorted.size() - 1)));
  std::nth_element(sorted.begin(), sorted.begin() + keep_rank, sorted.end());
  float threshold = sorted[keep_rank];

  float kept_min = 0.0f, kept_max = 0.0f;
  bool any_kept = false;
  for (float v : out.values) {
    if (v >= threshold && v > 0.0f) {
      if (!any_kept) {
        kept_min = kept_max = v;
        any_kept = true;
      } else {
        kept_min = std::min(kept_min, v);
        kept_max = std::max(kept_max, v);
      }
    }
  }
  auto penalty = static_cast<float>(params.penalty);
  for (float& v : out.values) {
    if (v >= threshold && v > 0.0f)
      v = kept_max > kept_min ? (v - kept_min) / (kept_max - kept_min) : 1.0f;
    else
      v = penalty;
  }
  return out;
}

MetricReport computeMetricReport(const smf::NoteList& notes,
                                 const std::string& piece_id,
                                 const MetricParams& params) {
  MetricReport report;
  report.piece_id = piece_id;
  report.note_count = static_cast<int>(notes.notes.size());
  report.duration_s = notes.total_duration_s;
  report.anomalies = notes.warnings;

  if (!notes.notes.empty())
    report.entropy = pitchClassEntropy(pitchClassHistogram(notes));

  try {
    report.consistency =
        pitchClassConsistency(notes, params.consistency_windows);
  } catch (const Error&) {
  }

  PointSet points = pointSet(notes, params.cr_grid_s);
  if (!points.empty()) report.compression_ratio = compressionRatio(points);

  if (!notes.notes.empty()) {
    Chromagram chroma = chromagram(notes, params.frame_rate);
    if (chroma.frames.size() >= 2) {
      Ssm enhanced = enhanceSsm(computeSsm(chroma), params.enhance);
      ScapeOptions scape_options;
      scape_options.exact = params.scape_exact;
      scape_options.work_budget = params.scape_work_budget;
      scape_options.workers = params.workers;
      ScapePlot plot = fitnessScapePlot(enhanced, scape_options);
      auto band = [&plot](double low, double high) -> std::optional<double> {
        try {
          return structurenessIndicator(plot, low, high);
        } catch (const Error&) {
          return std::nullopt;
        }
      };
      report.si_short = band(params.si_short_low_s, params.si_mid_low_s);
      report.si_mid = band(params.si_mid_low_s, params.si_long_low_s);
      report.si_long = band(params.si_long_low_s,
                            std::numeric_limits<double>::infinity());
    }
  }
  return report;
}

}  // namespace structok::metrics
