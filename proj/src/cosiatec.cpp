#include "structok/cosiatec.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>

#include "structok/error.h"

namespace structok::metrics {

namespace {

bool containsPoint(const PointSet& points, const Point& p) {
  return std::binary_search(points.begin(), points.end(), p);
}

Point minus(const Point& a, const Point& b) { return {a.t - b.t, a.p - b.p}; }
Point plus(const Point& a, const Point& b) { return {a.t + b.t, a.p + b.p}; }

// O(1) membership for the hot translator scans: a (time x pitch) bitmap
// over the sorted set's time range, falling back to binary search when the
// range is too sparse to justify the memory.
class PointLookup {
 public:
  explicit PointLookup(const PointSet& sorted) : points_(sorted) {
    if (sorted.empty()) return;
    t_min_ = sorted.front().t;
    int64_t span = sorted.back().t - t_min_ + 1;
    if (span <= 1 << 17) {  // 16 MB bitmap cap (~1.8 h at the 50 ms grid)
      cells_.assign(static_cast<std::size_t>(span) * 128, 0);
      for (const auto& p : sorted)
        cells_[static_cast<std::size_t>(p.t - t_min_) * 128 +
               static_cast<std::size_t>(p.p)] = 1;
    }
  }

  bool contains(const Point& p) const {
    if (cells_.empty()) return containsPoint(points_, p);
    if (p.p < 0 || p.p > 127 || p.t < t_min_) return false;
    auto offset = static_cast<uint64_t>(p.t - t_min_) * 128 +
                  static_cast<uint64_t>(p.p);
    return offset < cells_.size() && cells_[offset] != 0;
  }

 private:
  const PointSet& points_;
  int64_t t_min_ = 0;
  std::vector<uint8_t> cells_;
};

struct Candidate {
  Tec tec;
  int64_t covered = 0;
  std::pair<int64_t, int64_t> bbox;  // (time span, pitch span)
};

// Bounding box compared time-extent first: compact-in-time patterns win.
std::pair<int64_t, int64_t> boundingBox(const std::vector<Point>& pattern) {
  int64_t min_t = pattern.front().t, max_t = pattern.front().t;
  int min_p = pattern.front().p, max_p = pattern.front().p;
  for (const auto& pt : pattern) {
    min_t = std::min(min_t, pt.t);
    max_t = std::max(max_t, pt.t);
    min_p = std::min(min_p, pt.p);
    max_p = std::max(max_p, pt.p);
  }
  return {max_t - min_t, max_p - min_p};
}

int64_t coveredCount(const Tec& tec, std::vector<Point>& scratch) {
  scratch.clear();
  scratch.reserve(tec.pattern.size() * tec.translators.size());
  for (const auto& u : tec.translators)
    for (const auto& pt : tec.pattern) scratch.push_back(plus(pt, u));
  std::sort(scratch.begin(), scratch.end());
  scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
  return static_cast<int64_t>(scratch.size());
}

int64_t coveredCount(const Tec& tec) {
  std::vector<Point> scratch;
  return coveredCount(tec, scratch);
}

// Rational comparison of compression ratios covered/size, then the spec'd
// tie-breakers.
bool candidateBeats(const Candidate& a, const Candidate& b) {
  int64_t lhs = a.covered * b.tec.encodingSize();
  int64_t rhs = b.covered * a.tec.encodingSize();
  if (lhs != rhs) return lhs > rhs;
  if (a.covered != b.covered) return a.covered > b.covered;
  if (a.bbox != b.bbox) return a.bbox < b.bbox;
  return a.tec.pattern < b.tec.pattern;
}

// Builds the TEC of `pattern` (a subset of `points`): all translators, with
// the pattern shifted to its lexicographically smallest instance so equal
// classes found through different vectors canonicalize identically.
void buildTec(const std::vector<Point>& pattern, const PointSet& points,
              const PointLookup& lookup, std::vector<Point>& translators,
              Tec& tec) {
  translators.clear();
  const Point& anchor = pattern.front();
  for (const auto& q : points) {
    Point u = minus(q, anchor);
    bool ok = true;
    for (const auto& pt : pattern) {
      if (!lookup.contains(plus(pt, u))) {
        ok = false;
        break;
      }
    }
    if (ok) translators.push_back(u);
  }
  // The candidate anchors are scanned in sorted order, so `translators` is
  // already sorted.
  Point shift = translators.front();  // lexicographically smallest instance
  tec.pattern.clear();
  tec.pattern.reserve(pattern.size());
  for (const auto& pt : pattern) tec.pattern.push_back(plus(pt, shift));
  tec.translators.clear();
  tec.translators.reserve(translators.size());
  for (const auto& u : translators) tec.translators.push_back(minus(u, shift));
}

uint64_t mix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Best TEC over all maximal translatable patterns of `points`. With
// `require_compressing` the search serves the COSIATEC loop: single-point
// patterns (ratio exactly 1) are skipped outright and the returned
// candidate may still fail the strict covered > size test.
//
// Pruning: a TEC of an m-point pattern has ratio covered/size <=
// m*t/(m+t-1), which is < m for m >= 2 and <= 1 for m == 1. Patterns are
// visited largest-first, so once the incumbent reaches ratio >= m the rest
// cannot win or tie.
std::optional<Candidate> bestCandidate(const PointSet& points,
                                       bool require_compressing) {
  const auto n = points.size();

  // Flat difference table, sorted so equal vectors are adjacent and each
  // group's origins come out in ascending point order.
  struct Diff {
    Point vec;
    uint32_t origin;
  };
  std::vector<Diff> diffs;
  diffs.reserve(n * (n - 1) / 2);
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = i + 1; j < n; ++j)
      diffs.push_back({minus(points[j], points[i]), i});
  std::sort(diffs.begin(), diffs.end(), [](const Diff& a, const Diff& b) {
    if (a.vec != b.vec) return a.vec < b.vec;
    return a.origin < b.origin;
  });

  struct Group {
    std::size_t begin;
    std::size_t size;
  };
  std::vector<Group> groups;
  for (std::size_t i = 0; i < diffs.size();) {
    std::size_t j = i;
    while (j < diffs.size() && diffs[j].vec == diffs[i].vec) ++j;
    groups.push_back({i, j - i});
    i = j;
  }
  std::stable_sort(groups.begin(), groups.end(),
                   [](const Group& a, const Group& b) { return a.size > b.size; });

  std::optional<Candidate> best;
  PointLookup lookup(points);
  std::set<std::pair<uint64_t, uint64_t>> seen;  // 128-bit pattern hashes
  std::vector<Point> pattern, translators, covered_scratch;
  Candidate candidate;
  for (const auto& group : groups) {
    auto m = static_cast<int64_t>(group.size);
    if (require_compressing && m == 1) continue;
    if (best) {
      int64_t size = best->tec.encodingSize();
      if (m >= 2 && best->covered >= size * m) break;  // sorted: all done
      if (m == 1 && best->covered > size) break;
    }

    pattern.clear();
    for (std::size_t k = 0; k < group.size; ++k)
      pattern.push_back(points[diffs[group.begin + k].origin]);

    // Translation-invariant dedupe of patterns found via different vectors.
    uint64_t h1 = 0, h2 = 0x5BD1E995;
    for (const auto& pt : pattern) {
      Point d = minus(pt, pattern.front());
      auto dt = static_cast<uint64_t>(d.t);
      auto dp = static_cast<uint64_t>(d.p);
      h1 = mix64(h1 ^ (dt * 1000003 + dp));
      h2 = mix64((h2 + dt) ^ (dp * 0x100000001B3ull));
    }
    if (!seen.insert({h1, h2}).second) continue;

    buildTec(pattern, points, lookup, translators, candidate.tec);
    candidate.covered = coveredCount(candidate.tec, covered_scratch);
    candidate.bbox = boundingBox(candidate.tec.pattern);
    if (!best || candidateBeats(candidate, *best)) best = candidate;
  }
  return best;
}

}  // namespace

PointSet pointSet(const smf::NoteList& notes, double grid_s) {
  if (grid_s <= 0.0)
    throw Error(ErrorCode::InvalidArgument, "grid must be positive");
  PointSet points;
  points.reserve(notes.notes.size());
  for (const auto& note : notes.notes)
    points.push_back({static_cast<int64_t>(std::llround(note.onset_s / grid_s)),
                      note.pitch});
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

int64_t tecCoveredCount(const Tec& tec) { return coveredCount(tec); }

double tecCompressionRatio(const Tec& tec) {
  return static_cast<double>(coveredCount(tec)) /
         static_cast<double>(tec.encodingSize());
}

Tec bestTec(const PointSet& points) {
  if (points.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "bestTec needs at least 2 points");
  PointSet sorted = points;
  std::sort(sorted.begin(), sorted.end());
  return bestCandidate(sorted, /*require_compressing=*/false)->tec;
}

std::vector<Tec> cosiatec(const PointSet& points) {
  if (points.empty())
    throw Error(ErrorCode::InvalidArgument, "point set must be non-empty");
  PointSet remaining = points;
  if (!std::is_sorted(remaining.begin(), remaining.end()))
    std::sort(remaining.begin(), remaining.end());

  std::vector<Tec> tecs;
  while (remaining.size() >= 2) {
    auto found = bestCandidate(remaining, /*require_compressing=*/true);
    if (!found) break;  // only single-point patterns remain
    Candidate best = std::move(*found);
    if (best.covered <= best.tec.encodingSize())
      break;  // nothing left that strictly compresses
    // Remove the covered points.
    std::vector<Point> covered;
    for (const auto& u : best.tec.translators)
      for (const auto& pt : best.tec.pattern) covered.push_back(plus(pt, u));
    std::sort(covered.begin(), covered.end());
    covered.erase(std::unique(covered.begin(), covered.end()), covered.end());
    PointSet next;
    next.reserve(remaining.size());
    std::set_difference(remaining.begin(), remaining.end(), covered.begin(),
                        covered.end(), std::back_inserter(next));
    remaining = std::move(next);
    tecs.push_back(std::move(best.tec));
  }
  for (const auto& pt : remaining) {
    Tec singleton;
    singleton.pattern.push_back(pt);
    singleton.translators.push_back({0, 0});
    tecs.push_back(std::move(singleton));
  }
  return tecs;
}

double compressionRatio(const PointSet& points) {
  auto tecs = cosiatec(points);
  int64_t total_size = 0;
  for (const auto& tec : tecs) total_size += tec.encodingSize();
  return static_cast<double>(points.size()) / static_cast<double>(total_size);
}

}  // namespace structok::metrics
