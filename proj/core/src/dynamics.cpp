#include "recsim/dynamics.hpp"

#include <algorithm>
#include <numeric>

namespace recsim {

namespace {

constexpr std::uint64_t kStateNoiseKey = 0x5354415445ULL;  // "STATE"

}  // namespace

const Opinion& generate_opinion(SimulationState& state, AgentId author,
                                const OpinionObserver& observer) {
  const SimParams& p = state.params;
  Agent& ag = state.agents.at(author);
  Opinion op;
  op.id = state.opinion_log.size();
  op.author = author;
  op.round = op.id / p.opinions_per_round;
  op.content = ag.idea_state;
  op.content += fluctuation(state.rng, p.k, p.opinion_noise);
  if (observer) observer(op, state);
  ag.remember(op, p.recent_window);
  state.round_pool.push_back(op.id);
  state.opinion_log.push_back(std::move(op));
  return state.opinion_log.back();
}

std::optional<IdeaVector> effective_exposed(const ExposureSet& exposure,
                                            const SimulationState& state) {
  if (!exposure.opinions.empty()) {
    std::vector<const Opinion*> ops;
    ops.reserve(exposure.opinions.size());
    for (OpinionId id : exposure.opinions) ops.push_back(&state.opinion(id));
    return exposed_average(exposure.user, ops, state.weights);
  }
  if (exposure.edge_partners.empty()) return std::nullopt;

  const std::size_t k = state.params.k;
  IdeaVector sum(k);
  IdeaVector plain(k);
  double total = 0.0;
  for (AgentId j : exposure.edge_partners) {
    const IdeaVector rec = recent_average(state.agents[j]);
    const double w = state.weights.at(exposure.user, j);
    for (std::size_t d = 0; d < k; ++d) sum[d] += w * rec[d];
    plain += rec.components();
    total += w;
  }
  if (total > 0.0) {
    sum *= 1.0 / total;
    return sum;
  }
  plain *= 1.0 / static_cast<double>(exposure.edge_partners.size());
  return plain;
}

RngStream state_noise_stream(const SimulationState& state, std::size_t round, AgentId user) {
  return RngStream::keyed(state.params.seed, {kStateNoiseKey, round, user});
}

IdeaVector idea_state_delta(AgentId user, const ExposureSet& exposure,
                            const SimulationState& state, RngStream& noise) {
  const SimParams& p = state.params;
  IdeaVector delta(fluctuation(noise, p.k, p.state_noise));
  if (exposure.opinions.empty()) return delta;

  std::vector<const Opinion*> ops;
  ops.reserve(exposure.opinions.size());
  for (OpinionId id : exposure.opinions) ops.push_back(&state.opinion(id));
  const IdeaVector exposed = *exposed_average(user, ops, state.weights);
  const IdeaVector& x = state.agents[user].idea_state;
  for (std::size_t d = 0; d < p.k; ++d) delta[d] += p.c * (exposed[d] - x[d]);
  return delta;
}

namespace {

double weight_delta_with(AgentId user, const IdeaVector& partner_recent,
                         const IdeaVector& exposed, const SimulationState& state) {
  const SimParams& p = state.params;
  const bool norm = p.normalize_distance;
  const double f_h = p.theta_h - distance(state.agents[user].idea_state, partner_recent, norm);
  const double f_a = distance(exposed, partner_recent, norm) - p.theta_a;
  return p.h * f_h + p.a * f_a;
}

}  // namespace

double edge_weight_delta(AgentId user, AgentId partner, const ExposureSet& exposure,
                         const SimulationState& state) {
  const auto exposed = effective_exposed(exposure, state);
  const IdeaVector rec = recent_average(state.agents.at(partner));
  // The partner set is non-empty whenever this is called, so exposed exists.
  return weight_delta_with(user, rec, exposed.value_or(state.agents[user].idea_state), state);
}

RoundUpdate compute_round_update(const SimulationState& state, std::span<const AgentId> order) {
  const std::size_t n = state.params.n;
  std::vector<AgentId> default_order;
  if (order.empty()) {
    default_order.resize(n);
    std::iota(default_order.begin(), default_order.end(), AgentId{0});
    order = default_order;
  }

  std::vector<IdeaVector> recents;
  recents.reserve(n);
  for (const Agent& ag : state.agents) recents.push_back(recent_average(ag));

  RoundUpdate update;
  update.round = state.round_counter;
  update.state_deltas.resize(n);
  std::vector<std::vector<EdgeDelta>> per_user(n);

  for (AgentId user : order) {
    const ExposureSet exposure = recommend(state, user);
    RngStream noise = state_noise_stream(state, state.round_counter, user);
    update.state_deltas[user] = idea_state_delta(user, exposure, state, noise);
    if (exposure.edge_partners.empty()) continue;
    const IdeaVector exposed = *effective_exposed(exposure, state);
    for (AgentId partner : exposure.edge_partners)
      per_user[user].push_back(
          {user, partner, weight_delta_with(user, recents[partner], exposed, state)});
  }
  for (auto& deltas : per_user)
    update.weight_deltas.insert(update.weight_deltas.end(), deltas.begin(), deltas.end());
  return update;
}

void apply_round_update(SimulationState& state, const RoundUpdate& update) {
  for (AgentId i = 0; i < state.agents.size(); ++i)
    state.agents[i].idea_state += update.state_deltas.at(i).components();
  for (const EdgeDelta& e : update.weight_deltas) state.weights.at(e.user, e.partner) += e.delta;
  state.weights.clamp_unit();
  state.round_pool.clear();
  ++state.round_counter;
}

RoundUpdate run_round(SimulationState& state, const OpinionObserver& observer) {
  const std::size_t n = state.params.n;
  for (std::size_t t = 0; t < state.params.opinions_per_round; ++t)
    generate_opinion(state, static_cast<AgentId>(state.rng.below(n)), observer);
  RoundUpdate update = compute_round_update(state);
  apply_round_update(state, update);
  return update;
}

}  // namespace recsim
