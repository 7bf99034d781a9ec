// Geometric pattern compression: SIATEC translational equivalence classes
// and the COSIATEC greedy cover, yielding the compression ratio metric.

#ifndef STRUCTOK_COSIATEC_H_
#define STRUCTOK_COSIATEC_H_

#include <cstdint>
#include <vector>

#include "structok/smf.h"

namespace structok::metrics {

inline constexpr double kDefaultCrGridSeconds = 0.05;

struct Point {
  int64_t t = 0;  // onset grid step
  int p = 0;      // MIDI pitch

  friend auto operator<=>(const Point&, const Point&) = default;
};

// Sorted, duplicate-free point set.
using PointSet = std::vector<Point>;

PointSet pointSet(const smf::NoteList& notes,
                  double grid_s = kDefaultCrGridSeconds);

// A pattern with every translation vector mapping it into the point set
// (translators always contain (0,0)).
struct Tec {
  std::vector<Point> pattern;
  std::vector<Point> translators;

  int encodingSize() const {
    return static_cast<int>(pattern.size() + translators.size()) - 1;
  }
};

// Number of distinct points the TEC covers.
int64_t tecCoveredCount(const Tec& tec);

// covered / encodingSize for one TEC.
double tecCompressionRatio(const Tec& tec);

// Best TEC over all maximal translatable patterns of `points` by the
// selection rule: max compression ratio, ties by larger coverage, smaller
// pattern bounding box, lexicographically smaller pattern. Needs >= 2 points.
Tec bestTec(const PointSet& points);

// Greedy cover: repeatedly remove the best TEC's points while it strictly
// compresses (covered > encoding size); leftover points become singleton
// TECs. Every input point is covered exactly once.
std::vector<Tec> cosiatec(const PointSet& points);

double compressionRatio(const PointSet& points);

}  // namespace structok::metrics

#endif  // STRUCTOK_COSIATEC_H_
