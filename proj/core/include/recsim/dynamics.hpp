#pragma once

// Round-based co-evolution of idea states and edge weights.
//
// A round generates `opinions_per_round` opinions from randomly drawn
// authors, then updates every agent synchronously: all state and weight
// deltas are computed from the same post-generation snapshot and applied
// together. Weights are clamped to [0,1] afterwards; idea states are not.

#include <functional>
#include <vector>

#include "recsim/recommend.hpp"
#include "recsim/state.hpp"

namespace recsim {

struct EdgeDelta {
  AgentId user = 0;
  AgentId partner = 0;
  double delta = 0.0;

  friend bool operator==(const EdgeDelta&, const EdgeDelta&) = default;
};

struct RoundUpdate {
  std::size_t round = 0;
  std::vector<IdeaVector> state_deltas;  // indexed by agent id
  std::vector<EdgeDelta> weight_deltas;  // grouped by user, partners ascending

  friend bool operator==(const RoundUpdate&, const RoundUpdate&) = default;
};

/// Called once per generated opinion, before it enters the author's recent
/// buffer.
using OpinionObserver = std::function<void(const Opinion&, const SimulationState&)>;

/// Emits one opinion from `author` (idea state plus opinion noise drawn from
/// state.rng) and records it in the log, the round pool and the author's
/// recent buffer.
const Opinion& generate_opinion(SimulationState& state, AgentId author,
                                const OpinionObserver& observer = {});

/// Users' view of the exposed environment: the weighted opinion average if
/// opinions were exposed, else the weighted mean of the partners' recent
/// averages. nullopt when the exposure is entirely empty.
std::optional<IdeaVector> effective_exposed(const ExposureSet& exposure,
                                            const SimulationState& state);

/// Conformity pull toward the exposed average (skipped if nothing was
/// exposed) plus state noise from `noise`.
IdeaVector idea_state_delta(AgentId user, const ExposureSet& exposure,
                            const SimulationState& state, RngStream& noise);

/// h * (theta_h - |X_user - recent(partner)|)
///   + a * (|exposed(user) - recent(partner)| - theta_a)
double edge_weight_delta(AgentId user, AgentId partner, const ExposureSet& exposure,
                         const SimulationState& state);

/// Stream for the state noise of `user` in `round`. Keyed so that draws do
/// not depend on the order agents are processed.
RngStream state_noise_stream(const SimulationState& state, std::size_t round, AgentId user);

/// Deltas for every agent from the current snapshot. Does not mutate.
/// `order` is the processing order of users (default: ascending ids); the
/// result does not depend on it.
RoundUpdate compute_round_update(const SimulationState& state,
                                 std::span<const AgentId> order = {});

/// Applies deltas, clamps weights, clears the round pool and advances the
/// round counter.
void apply_round_update(SimulationState& state, const RoundUpdate& update);

/// Generation phase followed by the synchronous update.
RoundUpdate run_round(SimulationState& state, const OpinionObserver& observer = {});

}  // namespace recsim
