#include "test_support/oracles.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <boost/math/distributions/normal.hpp>

namespace structok::testing {

namespace {

// ---------------------------------------------------------------------------
// Path family enumeration
// ---------------------------------------------------------------------------

struct OraclePath {
  int start_row = 0;
  int end_row = 0;
  double score = 0.0;
  int cells = 0;
};

void enumeratePathsFrom(const std::vector<std::vector<double>>& m, int a,
                        int width, int row, int col, double score, int cells,
                        int start_row, std::vector<OraclePath>& out) {
  score += m[static_cast<std::size_t>(row)][static_cast<std::size_t>(a + col)];
  ++cells;
  if (col == width - 1) {
    out.push_back({start_row, row, score, cells});
    return;
  }
  const int n = static_cast<int>(m.size());
  struct Step {
    int dr, dc;
  };
  constexpr Step kSteps[] = {{1, 1}, {2, 1}, {1, 2}};
  for (const auto& step : kSteps) {
    int nr = row + step.dr;
    int nc = col + step.dc;
    if (nr < n && nc <= width - 1)
      enumeratePathsFrom(m, a, width, nr, nc, score, cells, start_row, out);
  }
}

bool statsBetter(const FamilyStats& x, const FamilyStats& y) {
  if (x.score != y.score) return x.score > y.score;
  if (x.coverage != y.coverage) return x.coverage > y.coverage;
  return x.cells < y.cells;
}

void enumerateFamilies(const std::vector<OraclePath>& paths, std::size_t index,
                       int min_start, FamilyStats current, FamilyStats& best) {
  if (statsBetter(current, best)) best = current;
  for (std::size_t i = index; i < paths.size(); ++i) {
    const OraclePath& path = paths[i];
    if (path.start_row < min_start) continue;
    FamilyStats next{current.score + path.score,
                     current.coverage + (path.end_row - path.start_row + 1),
                     current.cells + path.cells};
    enumerateFamilies(paths, 0, path.end_row + 1, next, best);
  }
}

// ---------------------------------------------------------------------------
// BCa reference helpers (independent straight-line copies)
// ---------------------------------------------------------------------------

uint64_t refSplitmix(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

uint64_t refDerivedSeed(uint64_t seed, uint64_t stream, uint64_t index) {
  return refSplitmix(refSplitmix(seed ^ 0xA076'1D64'78BD'642Full) +
                     stream * 0x10001 + index);
}

}  // namespace

FamilyStats exhaustivePathFamily(const std::vector<std::vector<double>>& matrix,
                                 int a, int b) {
  const int n = static_cast<int>(matrix.size());
  const int width = b - a + 1;
  std::vector<OraclePath> paths;
  for (int start = 0; start < n; ++start)
    enumeratePathsFrom(matrix, a, width, start, 0, 0.0, 0, start, paths);
  std::sort(paths.begin(), paths.end(),
            [](const OraclePath& x, const OraclePath& y) {
              return x.start_row < y.start_row;
            });
  FamilyStats best{0.0, 0, 0};  // the empty family
  enumerateFamilies(paths, 0, 0, FamilyStats{0.0, 0, 0}, best);
  return best;
}

metrics::Ssm ssmFromRows(const std::vector<std::vector<double>>& matrix,
                         double frame_rate) {
  metrics::Ssm ssm;
  ssm.n = static_cast<int>(matrix.size());
  ssm.frame_rate = frame_rate;
  ssm.values.resize(static_cast<std::size_t>(ssm.n) * ssm.n);
  for (int i = 0; i < ssm.n; ++i)
    for (int j = 0; j < ssm.n; ++j)
      ssm.at(i, j) = static_cast<float>(
          matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  return ssm;
}

TecRatio bruteForceBestTecRatio(const metrics::PointSet& points) {
  using metrics::Point;
  std::set<Point> in_set(points.begin(), points.end());
  auto contains = [&](const Point& p) { return in_set.count(p) > 0; };

  TecRatio best{0, 1};
  bool have_best = false;
  for (const auto& p : points) {
    for (const auto& q : points) {
      if (p == q) continue;
      Point v{q.t - p.t, q.p - p.p};
      std::vector<Point> pattern;
      for (const auto& x : points)
        if (contains({x.t + v.t, x.p + v.p})) pattern.push_back(x);
      if (pattern.empty()) continue;

      // All translators of the pattern.
      std::vector<Point> translators;
      for (const auto& y : points) {
        Point u{y.t - pattern.front().t, y.p - pattern.front().p};
        bool ok = true;
        for (const auto& x : pattern)
          if (!contains({x.t + u.t, x.p + u.p})) {
            ok = false;
            break;
          }
        if (ok) translators.push_back(u);
      }
      std::set<Point> covered;
      for (const auto& u : translators)
        for (const auto& x : pattern) covered.insert({x.t + u.t, x.p + u.p});

      TecRatio ratio{static_cast<int64_t>(covered.size()),
                     static_cast<int64_t>(pattern.size() + translators.size()) -
                         1};
      if (!have_best || ratio.covered * best.size > best.covered * ratio.size) {
        best = ratio;
        have_best = true;
      }
    }
  }
  return best;
}

double consistencyOracle(const smf::NoteList& notes, int windows) {
  double total = notes.total_duration_s;
  std::vector<std::vector<double>> hist(static_cast<std::size_t>(windows),
                                        std::vector<double>(12, 0.0));
  for (const auto& note : notes.notes) {
    auto w = static_cast<int>(note.onset_s / (total / windows));
    if (w > windows - 1) w = windows - 1;
    hist[static_cast<std::size_t>(w)][note.pitch % 12] += 1.0;
  }
  double kl_sum = 0.0;
  for (int w = 0; w + 1 < windows; ++w) {
    double sum_p = 0.0, sum_q = 0.0;
    for (int i = 0; i < 12; ++i) {
      sum_p += hist[w][i];
      sum_q += hist[w + 1][i];
    }
    double kl = 0.0;
    for (int i = 0; i < 12; ++i) {
      double p = (hist[w][i] + 1e-6) / (sum_p + 12e-6);
      double q = (hist[w + 1][i] + 1e-6) / (sum_q + 12e-6);
      kl += p * std::log2(p / q);
    }
    kl_sum += kl;
  }
  return kl_sum / (windows - 1);
}

BcaInterval bcaReference(const std::vector<double>& values, double level,
                         int resamples, uint64_t seed) {
  const boost::math::normal_distribution<double> normal;
  const auto n = values.size();

  double theta_hat = 0.0;
  for (double v : values) theta_hat += v;
  theta_hat /= static_cast<double>(n);

  // Same block convention as the library, re-typed here.
  std::vector<double> boot;
  boot.reserve(static_cast<std::size_t>(resamples));
  for (int block = 0; block * 512 < resamples; ++block) {
    std::mt19937_64 rng(refDerivedSeed(seed, 1, static_cast<uint64_t>(block)));
    for (int b = block * 512; b < std::min(resamples, (block + 1) * 512); ++b) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) sum += values[rng() % n];
      boot.push_back(sum / static_cast<double>(n));
    }
  }
  std::sort(boot.begin(), boot.end());

  double below = 0.0;
  for (double v : boot) {
    if (v < theta_hat) below += 1.0;
    if (v == theta_hat) below += 0.5;
  }
  double b_count = static_cast<double>(resamples);
  double p0 = below / b_count;
  if (p0 < 0.5 / b_count) p0 = 0.5 / b_count;
  if (p0 > 1.0 - 0.5 / b_count) p0 = 1.0 - 0.5 / b_count;
  double z0 = boost::math::quantile(normal, p0);

  std::vector<double> jack;
  jack.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) sum += values[j];
    jack.push_back(sum / static_cast<double>(n - 1));
  }
  double jack_mean = 0.0;
  for (double v : jack) jack_mean += v;
  jack_mean /= static_cast<double>(n);
  double s2 = 0.0, s3 = 0.0;
  for (double v : jack) {
    double d = jack_mean - v;
    s2 += d * d;
    s3 += d * d * d;
  }
  double accel = s2 > 0.0 ? s3 / (6.0 * std::pow(s2, 1.5)) : 0.0;

  double alpha = 1.0 - level;
  double z_lo = boost::math::quantile(normal, alpha / 2.0);
  double z_hi = boost::math::quantile(normal, 1.0 - alpha / 2.0);
  double a1 = boost::math::cdf(normal, z0 + (z0 + z_lo) / (1.0 - accel * (z0 + z_lo)));
  double a2 = boost::math::cdf(normal, z0 + (z0 + z_hi) / (1.0 - accel * (z0 + z_hi)));

  auto rank_of = [&](double p) {
    auto rank = static_cast<long>(std::ceil(p * b_count));
    if (rank < 1) rank = 1;
    if (rank > resamples) rank = resamples;
    return static_cast<std::size_t>(rank - 1);
  };
  BcaInterval interval{boot[rank_of(a1)], boot[rank_of(a2)]};
  if (interval.low > interval.high) std::swap(interval.low, interval.high);
  return interval;
}

double permutationTestP(const std::vector<double>& a,
                        const std::vector<double>& b, int shuffles,
                        uint64_t seed) {
  std::vector<double> pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto total = pooled.size();
  const auto n1 = a.size();

  // Midranks over the pooled values.
  std::vector<std::size_t> order(total);
  for (std::size_t i = 0; i < total; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return pooled[x] < pooled[y];
  });
  std::vector<double> ranks(total);
  std::size_t i = 0;
  while (i < total) {
    std::size_t j = i;
    while (j + 1 < total && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }

  double expected = static_cast<double>(n1) * (static_cast<double>(total) + 1.0) / 2.0;
  double observed = 0.0;
  for (std::size_t k = 0; k < n1; ++k) observed += ranks[k];
  double observed_dev = std::abs(observed - expected);

  std::mt19937_64 rng(seed);
  std::vector<double> shuffled = ranks;
  int matched = 0;
  for (int s = 0; s < shuffles; ++s) {
    for (std::size_t k = total - 1; k > 0; --k) {
      std::size_t j2 = rng() % (k + 1);
      std::swap(shuffled[k], shuffled[j2]);
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < n1; ++k) sum += shuffled[k];
    if (std::abs(sum - expected) >= observed_dev) ++matched;
  }
  return static_cast<double>(matched) / static_cast<double>(shuffles);
}

}  // namespace structok::testing
