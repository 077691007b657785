#pragma once

// Result tables, strategy comparison and the on-disk result formats.
//
//   rounds.csv        run_id,strategy,h,a,weight_init,seed,round,modularity,n_communities,community_std
//   eccentricity.csv  run_id,strategy,h,a,weight_init,round,opinion_id,author,eccentricity
//   summary.json      per cell and strategy: medians/IQR of the run maxima,
//                     eccentricity quantiles, one-sided Mann-Whitney p-values
//
// Reals are written in shortest round-trip form, so re-reading a CSV yields
// bit-identical values and summarize() over the files reproduces the
// summary written by the sweep.

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "recsim/harness.hpp"
#include "recsim/stats.hpp"

namespace recsim {

/// Everything the summary needs about one run; buildable from a RunResult or
/// from the CSV files.
struct RunRows {
  std::size_t run_id = 0;
  Strategy strategy = Strategy::SC;
  Cell cell;
  std::uint64_t seed = 0;
  std::vector<MetricsRecord> rounds;
  std::vector<EccentricityRecord> eccentricities;

  double max_modularity() const;
  double max_community_std() const;

  friend bool operator==(const RunRows&, const RunRows&) = default;
};

/// Successful runs ordered by run id.
struct SweepTable {
  std::vector<RunRows> runs;
  bool has_eccentricity = false;

  static SweepTable from_results(const std::vector<RunResult>& results);
};

enum class Metric { max_modularity, max_community_std, eccentricity };
std::string_view to_string(Metric m) noexcept;

struct Spread {
  std::size_t count = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

struct PairTest {
  Strategy first;
  Strategy second;
  stats::MannWhitney result;
};

struct ComparisonReport {
  enum class Status { ok, underpowered, error };

  Cell cell;
  Metric metric = Metric::max_modularity;
  stats::Alternative alternative = stats::Alternative::less;
  Status status = Status::ok;
  std::string message;
  std::map<Strategy, Spread> spreads;
  /// {NO, FO} x {SC, NU, FU, NOU}, for the strategies present.
  std::vector<PairTest> tests;
};

/// Opinion eccentricities from rounds before this are excluded from
/// eccentricity statistics.
inline constexpr std::size_t kEccentricityMinRound = 5;

/// Per-run samples of a metric; for eccentricity, the pooled per-opinion values.
std::vector<double> metric_sample(const SweepTable& table, Metric metric, const Cell& cell,
                                  Strategy strategy);

/// Medians/IQR per strategy and one-sided tests of the opinion strategies
/// against the others: "less" for the run maxima, "greater" for eccentricity.
/// Fewer than two strategies is an error; any strategy with fewer than three
/// runs makes the report underpowered (no p-values).
ComparisonReport compare_strategies(const SweepTable& table, Metric metric, const Cell& cell);

nlohmann::json build_summary(const SweepTable& table);

/// Error reading a result file; message carries "path:line: ...".
class ResultFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kRoundsHeader =
    "run_id,strategy,h,a,weight_init,seed,round,modularity,n_communities,community_std";
inline constexpr const char* kEccentricityHeader =
    "run_id,strategy,h,a,weight_init,round,opinion_id,author,eccentricity";

void write_rounds_csv(const SweepTable& table, const std::filesystem::path& path);
void write_eccentricity_csv(const SweepTable& table, const std::filesystem::path& path);

/// Reads rounds.csv and, when present next to it, eccentricity.csv.
SweepTable read_results_dir(const std::filesystem::path& dir);

/// Writes rounds.csv, eccentricity.csv (when the table has eccentricities)
/// and summary.json into `dir`, overwriting. Failed runs are listed in
/// failures.json. Throws std::runtime_error naming the path on I/O failure.
void persist(const std::vector<RunResult>& results, const std::filesystem::path& dir);
void write_summary(const SweepTable& table, const std::filesystem::path& dir);

/// Shortest representation that parses back to the same double.
std::string format_real(double v);

}  // namespace recsim
