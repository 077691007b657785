#pragma once

#include <algorithm>
#include <vector>

#include "recsim/state.hpp"

namespace recsim::testing {

/// Builds a state by hand. `contents[i]` and `authors[i]` describe opinion i;
/// opinions with index >= first_pool form the current round pool, the others
/// belong to earlier rounds. Every opinion enters its author's recent buffer
/// in id order.
inline SimulationState hand_state(SimParams p, std::vector<IdeaVector> states,
                                  std::vector<std::vector<double>> weights,
                                  std::vector<AgentId> authors, std::vector<IdeaVector> contents,
                                  std::size_t first_pool) {
  SimulationState st;
  p.n = states.size();
  p.k = states.front().size();
  st.params = p;
  for (AgentId i = 0; i < states.size(); ++i) st.agents.push_back({i, std::move(states[i]), {}});
  st.weights = WeightMatrix(p.n);
  for (std::size_t i = 0; i < p.n; ++i)
    for (std::size_t j = 0; j < p.n; ++j) st.weights.at(i, j) = weights[i][j];
  for (OpinionId id = 0; id < contents.size(); ++id) {
    Opinion op{id, authors[id], contents[id], id < first_pool ? 0u : 1u};
    st.agents[op.author].remember(op, p.recent_window);
    if (id >= first_pool) st.round_pool.push_back(id);
    st.opinion_log.push_back(std::move(op));
  }
  st.round_counter = first_pool > 0 ? 1 : 0;
  st.rng = RngStream(p.seed);
  return st;
}

/// n = 4, k = 2 fixture shared by the recommendation and update tests.
/// Opinions 0..3 are from the previous round; 4..7 form the pool.
inline SimulationState four_agent_fixture(Strategy strategy) {
  SimParams p;
  p.c = 0.2;
  p.h = 0.3;
  p.a = 0.05;
  p.theta_h = 0.1;
  p.theta_a = 0.1;
  p.opinion_noise = 0.0;
  p.state_noise = 0.0;
  p.opinions_per_round = 4;
  p.total_opinions = 8;
  p.recommendation_size = 2;
  p.strategy = strategy;
  p.seed = 11;
  return hand_state(p, {{0.1, 0.2}, {0.4, 0.3}, {0.8, 0.9}, {0.5, 0.6}},
                    {{0.0, 0.5, 0.2, 0.9},
                     {0.3, 0.0, 0.7, 0.1},
                     {0.6, 0.4, 0.0, 0.8},
                     {0.25, 0.35, 0.45, 0.0}},
                    {0, 1, 2, 3, 1, 2, 1, 0},
                    {{0.15, 0.25}, {0.35, 0.30}, {0.85, 0.80}, {0.55, 0.65},
                     {0.45, 0.35}, {0.75, 0.95}, {0.40, 0.20}, {0.05, 0.15}},
                    4);
}

}  // namespace recsim::testing
