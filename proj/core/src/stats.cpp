#include "recsim/stats.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

namespace recsim::stats {

double quantile(std::vector<double> values, double q) {
  assert(!values.empty());
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

std::vector<double> exact_u_counts(std::size_t m, std::size_t n) {
  // f(i, j, u) = f(i-1, j, u-j) + f(i, j-1, u): the largest pooled value
  // either belongs to the first sample (beating all j of the second) or not.
  const std::size_t width = m * n + 1;
  std::vector<std::vector<double>> prev(n + 1, std::vector<double>(width, 0.0));
  for (auto& row : prev) row[0] = 1.0;  // i = 0
  for (std::size_t i = 1; i <= m; ++i) {
    std::vector<std::vector<double>> cur(n + 1, std::vector<double>(width, 0.0));
    cur[0][0] = 1.0;
    for (std::size_t j = 1; j <= n; ++j) {
      for (std::size_t u = 0; u < width; ++u) {
        double v = cur[j - 1][u];
        if (u >= j) v += prev[j][u - j];
        cur[j][u] = v;
      }
    }
    prev = std::move(cur);
  }
  return prev[n];
}

MannWhitney mann_whitney_u(std::span<const double> x, std::span<const double> y,
                           Alternative alt) {
  assert(!x.empty() && !y.empty());
  const std::size_t m = x.size();
  const std::size_t n = y.size();
  const std::size_t total = m + n;

  struct Item {
    double v;
    bool first;
  };
  std::vector<Item> pooled;
  pooled.reserve(total);
  for (double v : x) pooled.push_back({v, true});
  for (double v : y) pooled.push_back({v, false});
  std::sort(pooled.begin(), pooled.end(), [](const Item& a, const Item& b) { return a.v < b.v; });

  double rank_sum = 0.0;
  double tie_term = 0.0;
  bool ties = false;
  for (std::size_t i = 0; i < total;) {
    std::size_t j = i;
    while (j < total && pooled[j].v == pooled[i].v) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
    const auto t = static_cast<double>(j - i);
    if (j - i > 1) {
      ties = true;
      tie_term += t * t * t - t;
    }
    for (std::size_t k = i; k < j; ++k)
      if (pooled[k].first) rank_sum += mid_rank;
    i = j;
  }

  MannWhitney out;
  out.u = rank_sum - 0.5 * static_cast<double>(m * (m + 1));

  if (!ties && m <= 50 && n <= 50) {
    const std::vector<double> counts = exact_u_counts(m, n);
    const double all = std::accumulate(counts.begin(), counts.end(), 0.0);
    const auto u_obs = static_cast<std::size_t>(std::llround(out.u));
    double tail = 0.0;
    if (alt == Alternative::less) {
      for (std::size_t u = 0; u <= u_obs; ++u) tail += counts[u];
    } else {
      for (std::size_t u = u_obs; u < counts.size(); ++u) tail += counts[u];
    }
    out.p = std::min(1.0, tail / all);
    out.exact = true;
    return out;
  }

  const double dm = static_cast<double>(m);
  const double dn = static_cast<double>(n);
  const double dt = static_cast<double>(total);
  const double mean = 0.5 * dm * dn;
  const double var = dm * dn / 12.0 * ((dt + 1.0) - tie_term / (dt * (dt - 1.0)));
  if (var <= 0.0) {
    out.p = 1.0;
    return out;
  }
  const double sd = std::sqrt(var);
  // Phi(z) = erfc(-z / sqrt 2) / 2
  if (alt == Alternative::less) {
    const double z = (out.u - mean + 0.5) / sd;
    out.p = 0.5 * std::erfc(-z / std::sqrt(2.0));
  } else {
    const double z = (out.u - mean - 0.5) / sd;
    out.p = 0.5 * std::erfc(z / std::sqrt(2.0));
  }
  out.p = std::min(1.0, out.p);
  return out;
}

}  // namespace recsim::stats
