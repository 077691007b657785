#pragma once

// JSON forms of run parameters, experiment configs and state snapshots.
//
// Config file layout (every key optional):
//
//   {
//     "preset": "desk",                 // paper | paper_eccentricity | desk
//     "master_seed": 7,
//     "replications": 5,
//     "weight_init": ["uniform", "power_law"],
//     "homophily_novelty": [[0.3, 0.01], [0.01, 0.3]],
//     "strategies": ["SC", "NO", "FO", "NU", "FU", "NOU"],
//     "eccentricity": true,
//     "workers": 4,
//     "output_dir": "results",
//     "params": { "n": 50, "total_opinions": 1500, ... }   // SimParams keys
//   }
//
// Unknown keys are rejected so typos do not silently fall back to defaults.

#include <filesystem>

#include <nlohmann/json.hpp>

#include "recsim/harness.hpp"
#include "recsim/state.hpp"

namespace recsim {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

nlohmann::json to_json(const SimParams& p);
/// Overlays the keys present in `j` onto `base`.
SimParams params_from_json(const nlohmann::json& j, SimParams base = {});

nlohmann::json to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Snapshot: params, round counter, rng state, idea states, recent buffers
/// (opinion ids), weight matrix rows, opinion log and current round pool.
nlohmann::json snapshot(const SimulationState& state);
SimulationState restore_snapshot(const nlohmann::json& j);

}  // namespace recsim
