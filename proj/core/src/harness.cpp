#include "recsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "recsim/dynamics.hpp"

namespace recsim {

void ExperimentConfig::validate() const {
  if (replications < 1) throw std::invalid_argument("replications must be >= 1");
  if (weight_inits.empty() || homophily_novelty.empty() || strategies.empty())
    throw std::invalid_argument("parameter grid is empty");
  for (auto [h, a] : homophily_novelty)
    if (!(h >= 0) || !(a >= 0)) throw std::invalid_argument("h and a must be >= 0");
  base.validate();
}

std::vector<Cell> ExperimentConfig::cells() const {
  std::vector<Cell> out;
  for (WeightInit wi : weight_inits)
    for (auto [h, a] : homophily_novelty) out.push_back({wi, h, a});
  return out;
}

ExperimentConfig ExperimentConfig::paper_preset() {
  ExperimentConfig cfg;
  cfg.base.n = 100;
  cfg.base.total_opinions = 3000;
  cfg.replications = 15;
  return cfg;
}

ExperimentConfig ExperimentConfig::paper_eccentricity_preset() {
  ExperimentConfig cfg = paper_preset();
  cfg.replications = 3;
  cfg.eccentricity = true;
  return cfg;
}

ExperimentConfig ExperimentConfig::desk_preset() {
  ExperimentConfig cfg;
  cfg.base.n = 50;
  cfg.base.total_opinions = 1500;
  cfg.replications = 5;
  cfg.eccentricity = true;
  cfg.master_seed = 20240601;
  return cfg;
}

std::uint64_t run_seed(std::uint64_t master_seed, const Cell& cell, std::size_t replication) {
  return stable_hash({master_seed, static_cast<std::uint64_t>(cell.weight_init),
                      std::bit_cast<std::uint64_t>(cell.h), std::bit_cast<std::uint64_t>(cell.a),
                      replication});
}

std::vector<RunSpec> expand_grid(const ExperimentConfig& config) {
  config.validate();
  std::vector<RunSpec> specs;
  const auto cells = config.cells();
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    for (Strategy s : config.strategies) {
      for (std::size_t rep = 0; rep < config.replications; ++rep) {
        RunSpec spec;
        spec.run_id = specs.size();
        spec.cell_index = ci;
        spec.cell = cells[ci];
        spec.replication = rep;
        spec.params = config.base;
        spec.params.weight_init = cells[ci].weight_init;
        spec.params.h = cells[ci].h;
        spec.params.a = cells[ci].a;
        spec.params.strategy = s;
        spec.params.seed = run_seed(config.master_seed, cells[ci], rep);
        spec.eccentricity = config.eccentricity;
        specs.push_back(std::move(spec));
      }
    }
  }
  return specs;
}

namespace {

std::string find_non_finite(const SimulationState& st, const MetricsRecord& rec) {
  for (const Agent& ag : st.agents)
    if (!ag.idea_state.all_finite()) return "idea state of agent " + std::to_string(ag.id);
  const auto w = st.weights.data();
  for (std::size_t idx = 0; idx < w.size(); ++idx) {
    if (!std::isfinite(w[idx])) {
      const std::size_t n = st.weights.size();
      return "weight w[" + std::to_string(idx / n) + "][" + std::to_string(idx % n) + "]";
    }
  }
  if (!std::isfinite(rec.modularity)) return "modularity";
  if (!std::isfinite(rec.community_std)) return "community_std";
  return {};
}

}  // namespace

RunResult execute(const RunSpec& spec, const RoundHook& hook) {
  RunResult result;
  result.spec = spec;
  try {
    SimulationState st = init_network(spec.params);
    OpinionObserver observer;
    if (spec.eccentricity) {
      observer = [&result](const Opinion& op, const SimulationState& s) {
        result.eccentricities.push_back({op.round, op.id, op.author, eccentricity(op, s)});
      };
    }
    const std::size_t rounds = spec.params.rounds();
    result.rounds.reserve(rounds);
    for (std::size_t r = 0; r < rounds; ++r) {
      run_round(st, observer);
      if (spec.fault_round && *spec.fault_round == r)
        st.agents.front().idea_state[0] = std::nan("");
      MetricsRecord rec = record_round_metrics(st);
      if (const std::string bad = find_non_finite(st, rec); !bad.empty()) {
        std::ostringstream msg;
        msg << "run " << spec.run_id << ": non-finite " << bad << " after round " << r;
        throw std::runtime_error(msg.str());
      }
      for (const auto& e : result.eccentricities)
        if (!std::isfinite(e.eccentricity))
          throw std::runtime_error("run " + std::to_string(spec.run_id) +
                                   ": non-finite eccentricity of opinion " +
                                   std::to_string(e.opinion_id));
      if (hook) hook(st, rec);
      result.rounds.push_back(rec);
    }
  } catch (const std::exception& e) {
    result.ok = false;
    result.error = e.what();
  }
  if (!result.rounds.empty()) {
    result.max_modularity = result.rounds.front().modularity;
    result.max_community_std = result.rounds.front().community_std;
    for (const MetricsRecord& rec : result.rounds) {
      result.max_modularity = std::max(result.max_modularity, rec.modularity);
      result.max_community_std = std::max(result.max_community_std, rec.community_std);
    }
  }
  return result;
}

std::vector<RunResult> execute_all(const std::vector<RunSpec>& specs, std::size_t workers,
                                   const ProgressFn& progress) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(1, specs.size()));

  std::vector<RunResult> results(specs.size());
  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex progress_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < specs.size(); i = next++) {
          results[i] = execute(specs[i]);
          if (progress) {
            std::lock_guard lock(progress_mutex);
            progress(results[i], ++done, specs.size());
          }
        }
      });
    }
  }
  return results;
}

}  // namespace recsim
