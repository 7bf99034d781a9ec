// Fitness scape plot: the optimal path-family dynamic program scored over
// every (center, length) segment of an enhanced SSM, and the structureness
// indicator bands read off it.

#ifndef STRUCTOK_SCAPE_H_
#define STRUCTOK_SCAPE_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "structok/metrics.h"

namespace structok::metrics {

struct PathFamilyResult {
  double score = 0.0;  // accumulated similarity of the optimal family
  int coverage = 0;    // rows spanned by the family's paths
  int cells = 0;       // total path length (cells) of the family
};

// Optimal path family for segment columns [seg_begin, seg_end] (inclusive)
// against all rows: step conditions (1,1), (2,1), (1,2) plus an elevator
// that starts a new path at the segment's first column from any row. Among
// equal-score families the result maximizes coverage, then minimizes cells.
PathFamilyResult pathFamilyScore(const Ssm& enhanced, int seg_begin,
                                 int seg_end);

struct ScapeOptions {
  bool exact = false;         // evaluate every segment regardless of cost
  double work_budget = 1.5e9;  // approx DP cell budget per plot
  int workers = 0;            // 0 = hardware concurrency
};

// Triangular fitness surface. With a stride > 1 only segments whose length
// and start are multiples of the stride are evaluated (plus the full-piece
// segment); unevaluated cells report -1.
class ScapePlot {
 public:
  ScapePlot(int n, double frame_rate, int stride);

  int n() const { return n_; }
  double frameRate() const { return frame_rate_; }
  int stride() const { return stride_; }

  // length in [1, n], start in [0, n - length].
  float fitnessAt(int start, int length) const;
  void setFitness(int start, int length, float value);
  bool isEvaluated(int start, int length) const { return fitnessAt(start, length) >= 0.0f; }

  void forEachEvaluated(
      const std::function<void(int start, int length, float fitness)>& fn) const;

 private:
  int n_;
  double frame_rate_;
  int stride_;
  std::vector<std::size_t> offsets_;  // per length-1
  std::vector<float> values_;
};

// Computes normalized score and coverage for every segment on the evaluation
// grid and combines them into the harmonic-mean fitness in [0,1].
ScapePlot fitnessScapePlot(const Ssm& enhanced, const ScapeOptions& options = {});

// Maximum fitness over segments whose duration lies in [low_s, high_s).
// Throws BandEmpty when the piece has no evaluated segment in the band.
double structurenessIndicator(const ScapePlot& plot, double low_s,
                              double high_s);

void writeScapeCsv(const ScapePlot& plot, std::ostream& out);
void writeScapePgm(const ScapePlot& plot, std::ostream& out);

}  // namespace structok::metrics

#endif  // STRUCTOK_SCAPE_H_
