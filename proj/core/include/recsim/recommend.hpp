#pragma once

// Exposure strategies. Each takes the post-generation snapshot of a round and
// decides, for one user, which pool opinions it sees and which incoming edges
// it re-evaluates.
//
// Ties are always broken by ascending id (opinion id for opinion strategies,
// agent id for user strategies) so selection is a pure function of the state.

#include <vector>

#include "recsim/state.hpp"

namespace recsim {

struct ExposureSet {
  AgentId user = 0;
  /// Opinion ids, ordered by selection rank (SC: by id).
  std::vector<OpinionId> opinions;
  /// Sorted, unique. Edges w[user][partner] are updated this round.
  std::vector<AgentId> edge_partners;

  friend bool operator==(const ExposureSet&, const ExposureSet&) = default;
};

ExposureSet strongest_connections(const SimulationState& state, AgentId user);
ExposureSet nearest_opinions(const SimulationState& state, AgentId user);
ExposureSet farthest_opinions(const SimulationState& state, AgentId user);
ExposureSet nearest_users(const SimulationState& state, AgentId user);
ExposureSet farthest_users(const SimulationState& state, AgentId user);
ExposureSet nearest_opinions_and_users(const SimulationState& state, AgentId user);

/// Dispatches on state.params.strategy.
ExposureSet recommend(const SimulationState& state, AgentId user);
ExposureSet recommend(Strategy strategy, const SimulationState& state, AgentId user);

/// Distinct authors of the current round pool, ascending.
std::vector<AgentId> active_users(const SimulationState& state);

}  // namespace recsim
