#include "structok/scape.h"

#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include "structok/error.h"
#include "structok/util.h"

namespace structok::metrics {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// DP cell: accumulated family score plus the coverage and path-cell totals
// of the family achieving it. Ordering is lexicographic (score desc,
// coverage desc, cells asc) so equal-score ties resolve deterministically
// and match the exhaustive-enumeration oracle.
struct Cell {
  double score = kNegInf;
  int32_t cov = 0;
  int32_t cells = 0;
};

inline bool betterThan(const Cell& a, const Cell& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.cov != b.cov) return a.cov > b.cov;
  return a.cells < b.cells;
}

inline const Cell& best(const Cell& a, const Cell& b) {
  return betterThan(a, b) ? a : b;
}

// Reusable scratch for the rolling three-row DP.
class PathFamilyDp {
 public:
  PathFamilyResult run(const Ssm& s, int seg_begin, int seg_end) {
    const int n = s.n;
    const int width = seg_end - seg_begin + 1;  // M
    const int cols = width + 1;                 // +1 elevator column

    rows_[0].assign(static_cast<std::size_t>(cols), Cell{});
    rows_[1].assign(static_cast<std::size_t>(cols), Cell{});
    rows_[2].assign(static_cast<std::size_t>(cols), Cell{});
    Cell* prev2 = rows_[0].data();
    Cell* prev = rows_[1].data();
    Cell* cur = rows_[2].data();

    for (int m = 0; m < cols; ++m) prev[m] = Cell{};
    prev[0] = {0.0, 0, 0};
    prev[1] = {static_cast<double>(s.at(0, seg_begin)), 1, 1};

    for (int r = 1; r < n; ++r) {
      const float* srow = &s.values[static_cast<std::size_t>(r) * s.n + seg_begin];
      cur[0] = best(prev[0], prev[cols - 1]);
      cur[1] = cur[0].score == kNegInf
                   ? Cell{}
                   : Cell{cur[0].score + srow[0], cur[0].cov + 1, cur[0].cells + 1};
      const bool has_prev2 = r >= 2;
      for (int m = 2; m < cols; ++m) {
        // Candidates carry their row-delta coverage up front; the common
        // +1 coverage / +1 cells of entering the current cell is applied
        // once at the end.
        double best_score = prev[m - 1].score;  // (1,1)
        int32_t best_cov = prev[m - 1].cov;
        int32_t best_cells = prev[m - 1].cells;
        if (has_prev2) {
          const Cell& skip = prev2[m - 1];  // (2,1) spans one extra row
          int32_t cov = skip.cov + 1;
          if (skip.score > best_score ||
              (skip.score == best_score &&
               (cov > best_cov ||
                (cov == best_cov && skip.cells < best_cells)))) {
            best_score = skip.score;
            best_cov = cov;
            best_cells = skip.cells;
          }
        }
        if (m > 2) {
          // (1,2); for m == 2 the left neighbour is the elevator, and paths
          // must enter the segment at its first column.
          const Cell& wide = prev[m - 2];
          if (wide.score > best_score ||
              (wide.score == best_score &&
               (wide.cov > best_cov ||
                (wide.cov == best_cov && wide.cells < best_cells)))) {
            best_score = wide.score;
            best_cov = wide.cov;
            best_cells = wide.cells;
          }
        }
        cur[m] = best_score == kNegInf
                     ? Cell{}
                     : Cell{best_score + srow[m - 1], best_cov + 1,
                            best_cells + 1};
      }
      Cell* rotate = prev2;
      prev2 = prev;
      prev = cur;
      cur = rotate;
    }

    Cell final_cell = best(prev[0], prev[cols - 1]);
    if (final_cell.score == kNegInf) final_cell = {0.0, 0, 0};
    return {final_cell.score, final_cell.cov, final_cell.cells};
  }

 private:
  std::vector<Cell> rows_[3];
};

double fitnessOf(const PathFamilyResult& family, int seg_length, int n) {
  double score_norm =
      (family.score - seg_length) / std::max(1, family.cells);
  double coverage_norm =
      (static_cast<double>(family.coverage) - seg_length) / n;
  score_norm = std::max(0.0, score_norm);
  coverage_norm = std::max(0.0, coverage_norm);
  double denom = score_norm + coverage_norm;
  if (denom <= 0.0) return 0.0;
  return 2.0 * score_norm * coverage_norm / denom;
}

double scapeWork(int n, int stride) {
  double work = 0.0;
  for (int length = stride; length <= n; length += stride) {
    double starts = std::ceil(static_cast<double>(n - length + 1) / stride);
    work += starts * static_cast<double>(n) * (length + 1);
  }
  return work;
}

int chooseStride(int n, const ScapeOptions& options) {
  if (options.exact) return 1;
  int stride = 1;
  while (stride < n && scapeWork(n, stride) > options.work_budget) ++stride;
  return stride;
}

}  // namespace

PathFamilyResult pathFamilyScore(const Ssm& enhanced, int seg_begin,
                                 int seg_end) {
  if (seg_begin < 0 || seg_end < seg_begin || seg_end >= enhanced.n)
    throw Error(ErrorCode::InvalidArgument, "segment out of range");
  PathFamilyDp dp;
  return dp.run(enhanced, seg_begin, seg_end);
}

ScapePlot::ScapePlot(int n, double frame_rate, int stride)
    : n_(n), frame_rate_(frame_rate), stride_(stride) {
  offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  std::size_t total = 0;
  for (int length = 1; length <= n; ++length) {
    offsets_[length - 1] = total;
    total += static_cast<std::size_t>(n - length + 1);
  }
  offsets_[n] = total;
  values_.assign(total, -1.0f);
}

float ScapePlot::fitnessAt(int start, int length) const {
  return values_[offsets_[length - 1] + static_cast<std::size_t>(start)];
}

void ScapePlot::setFitness(int start, int length, float value) {
  values_[offsets_[length - 1] + static_cast<std::size_t>(start)] = value;
}

void ScapePlot::forEachEvaluated(
    const std::function<void(int, int, float)>& fn) const {
  for (int length = 1; length <= n_; ++length) {
    std::size_t base = offsets_[length - 1];
    for (int start = 0; start <= n_ - length; ++start) {
      float v = values_[base + static_cast<std::size_t>(start)];
      if (v >= 0.0f) fn(start, length, v);
    }
  }
}

ScapePlot fitnessScapePlot(const Ssm& enhanced, const ScapeOptions& options) {
  const int n = enhanced.n;
  if (n < 2)
    throw Error(ErrorCode::TooShort, "scape plot needs at least 2 frames");

  int stride = chooseStride(n, options);
  ScapePlot plot(n, enhanced.frame_rate, stride);

  struct Item {
    int start;
    int length;
  };
  std::vector<Item> items;
  for (int length = stride; length <= n; length += stride)
    for (int start = 0; start <= n - length; start += stride)
      items.push_back({start, length});

  unsigned n_threads =
      options.workers > 0
          ? static_cast<unsigned>(options.workers)
          : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads,
                                 std::max<std::size_t>(1, items.size()));

  std::atomic<std::size_t> next{0};
  constexpr std::size_t kBatch = 32;
  auto worker = [&] {
    PathFamilyDp dp;
    for (;;) {
      std::size_t begin = next.fetch_add(kBatch);
      if (begin >= items.size()) return;
      std::size_t end = std::min(items.size(), begin + kBatch);
      for (std::size_t i = begin; i < end; ++i) {
        const Item& item = items[i];
        PathFamilyResult family =
            dp.run(enhanced, item.start, item.start + item.length - 1);
        plot.setFitness(item.start, item.length,
                        static_cast<float>(fitnessOf(family, item.length, n)));
      }
    }
  };
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return plot;
}

double structurenessIndicator(const ScapePlot& plot, double low_s,
                              double high_s) {
  if (!(low_s < high_s))
    throw Error(ErrorCode::InvalidArgument, "band bounds must satisfy low < high");
  double rate = plot.frameRate();
  int min_length = std::max(1, static_cast<int>(std::ceil(low_s * rate)));
  int max_length = plot.n();
  if (std::isfinite(high_s))
    max_length = std::min(
        max_length, static_cast<int>(std::ceil(high_s * rate)) - 1);

  double best = -1.0;
  for (int length = min_length; length <= max_length; ++length) {
    for (int start = 0; start <= plot.n() - length; ++start) {
      float v = plot.fitnessAt(start, length);
      if (v >= 0.0f && v > best) best = v;
    }
  }
  if (best < 0.0)
    throw Error(ErrorCode::BandEmpty,
                "no evaluated segment with duration in band");
  return best;
}

void writeScapeCsv(const ScapePlot& plot, std::ostream& out) {
  out << "center_s,length_s,fitness\n";
  out.precision(9);
  double rate = plot.frameRate();
  plot.forEachEvaluated([&](int start, int length, float fitness) {
    double center = (start + (length - 1) / 2.0) / rate;
    out << center << ',' << length / rate << ',' << fitness << '\n';
  });
}

void writeScapePgm(const ScapePlot& plot, std::ostream& out) {
  const int n = plot.n();
  std::vector<int> row(static_cast<std::size_t>(n), 0);
  out << "P2\n" << n << ' ' << n << "\n255\n";
  for (int length = 1; length <= n; ++length) {
    std::fill(row.begin(), row.end(), 0);
    for (int start = 0; start <= n - length; ++start) {
      float v = plot.fitnessAt(start, length);
      if (v < 0.0f) continue;
      int col = start + (length - 1) / 2;
      row[col] = std::max(row[col],
                          static_cast<int>(std::lround(v * 255.0f)));
    }
    for (int col = 0; col < n; ++col)
      out << row[col] << (col + 1 == n ? '\n' : ' ');
  }
}

}  // namespace structok::metrics
