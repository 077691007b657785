#pragma once

// Experiment orchestration: parameter grid expansion, execution of single
// runs and parallel execution of a whole sweep.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "recsim/metrics.hpp"
#include "recsim/state.hpp"

namespace recsim {

/// A parameter cell: the (h, a, weight_init) combination that strategies are
/// compared within.
struct Cell {
  WeightInit weight_init = WeightInit::uniform;
  double h = 0.0;
  double a = 0.0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct ExperimentConfig {
  std::vector<WeightInit> weight_inits{WeightInit::uniform, WeightInit::power_law};
  std::vector<std::pair<double, double>> homophily_novelty{{0.3, 0.01}, {0.01, 0.3}};
  std::vector<Strategy> strategies{std::begin(kAllStrategies), std::end(kAllStrategies)};
  std::size_t replications = 15;
  std::uint64_t master_seed = 1;
  /// Everything except h, a, weight_init, strategy and seed, which the grid sets.
  SimParams base{};
  bool eccentricity = false;
  /// 0 means one worker per hardware thread.
  std::size_t workers = 0;
  /// Empty: fall back to the tool's default output directory.
  std::string output_dir;

  void validate() const;
  std::vector<Cell> cells() const;

  /// Network-dynamics set: n=100, 3000 opinions, 15 replications.
  static ExperimentConfig paper_preset();
  /// Eccentricity set: as paper_preset with 3 replications and eccentricity on.
  static ExperimentConfig paper_eccentricity_preset();
  /// n=50, 1500 opinions, 5 replications, eccentricity on.
  static ExperimentConfig desk_preset();
};

struct RunSpec {
  std::size_t run_id = 0;
  std::size_t cell_index = 0;
  Cell cell;
  std::size_t replication = 0;
  /// Fully resolved parameters, including strategy and seed.
  SimParams params;
  bool eccentricity = false;
  /// Test hook: poison an idea state with NaN after this round.
  std::optional<std::size_t> fault_round;

  friend bool operator==(const RunSpec&, const RunSpec&) = default;
};

/// Seed shared by every strategy of a (cell, replication), so strategies are
/// compared on the same initial network. Depends only on the cell's values,
/// never on its position in the grid.
std::uint64_t run_seed(std::uint64_t master_seed, const Cell& cell, std::size_t replication);

/// |cells| x |strategies| x replications specs; run ids in grid order.
std::vector<RunSpec> expand_grid(const ExperimentConfig& config);

struct EccentricityRecord {
  std::size_t round = 0;
  OpinionId opinion_id = 0;
  AgentId author = 0;
  double eccentricity = 0.0;

  friend bool operator==(const EccentricityRecord&, const EccentricityRecord&) = default;
};

struct RunResult {
  RunSpec spec;
  bool ok = true;
  std::string error;
  std::vector<MetricsRecord> rounds;
  double max_modularity = 0.0;
  double max_community_std = 0.0;
  std::vector<EccentricityRecord> eccentricities;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

/// Invoked after each round with the post-update state and its metrics.
using RoundHook = std::function<void(const SimulationState&, const MetricsRecord&)>;

/// Runs one simulation to completion. Non-finite state, weights or metrics
/// (and any exception) mark the result as failed with a diagnostic.
RunResult execute(const RunSpec& spec, const RoundHook& hook = {});

using ProgressFn = std::function<void(const RunResult&, std::size_t done, std::size_t total)>;

/// Executes specs on a bounded worker pool. Results are ordered as `specs`
/// and do not depend on the worker count.
std::vector<RunResult> execute_all(const std::vector<RunSpec>& specs, std::size_t workers,
                                   const ProgressFn& progress = {});

}  // namespace recsim
