#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace recsim::stats {

/// Linear-interpolation quantile (Hyndman-Fan type 7) of unsorted data.
/// Requires non-empty input and 0 <= q <= 1.
double quantile(std::vector<double> values, double q);
double median(std::vector<double> values);

enum class Alternative {
  less,     // first sample tends to be smaller
  greater,  // first sample tends to be larger
};

struct MannWhitney {
  double u = 0.0;  // U statistic of the first sample (pairs x > y, ties count 1/2)
  double p = 1.0;
  bool exact = false;
};

/// One-sided Mann-Whitney U test. Uses the exact null distribution when the
/// pooled sample has no ties and both sizes are <= 50; otherwise the normal
/// approximation with tie and continuity correction. Requires both samples
/// non-empty.
MannWhitney mann_whitney_u(std::span<const double> x, std::span<const double> y,
                           Alternative alt);

/// Number of (x, y) rank arrangements giving each U value, for sizes m, n.
/// Index u in [0, m*n].
std::vector<double> exact_u_counts(std::size_t m, std::size_t n);

}  // namespace recsim::stats
