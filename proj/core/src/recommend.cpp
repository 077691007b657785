#include "recsim/recommend.hpp"

#include <algorithm>

namespace recsim {

namespace {

struct Ranked {
  double key;
  std::size_t id;
};

// Smallest `count` entries by (key, id), returned in rank order. nth_element
// keeps this linear on average; only the selected prefix is sorted.
std::vector<Ranked> select_top(std::vector<Ranked> items, std::size_t count) {
  auto less = [](const Ranked& x, const Ranked& y) {
    return x.key < y.key || (x.key == y.key && x.id < y.id);
  };
  if (items.size() > count) {
    std::nth_element(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(count),
                     items.end(), less);
    items.resize(count);
  }
  std::sort(items.begin(), items.end(), less);
  return items;
}

std::vector<AgentId> sorted_unique(std::vector<AgentId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

ExposureSet select_opinions(const SimulationState& state, AgentId user, bool farthest) {
  const bool norm = state.params.normalize_distance;
  const IdeaVector& x = state.agents[user].idea_state;
  std::vector<Ranked> items;
  items.reserve(state.round_pool.size());
  for (OpinionId id : state.round_pool) {
    const Opinion& op = state.opinion(id);
    if (op.author == user) continue;
    const double d = distance(op.content, x, norm);
    items.push_back({farthest ? -d : d, id});
  }
  ExposureSet out{user, {}, {}};
  std::vector<AgentId> authors;
  for (const Ranked& r : select_top(std::move(items), state.params.recommendation_size)) {
    out.opinions.push_back(r.id);
    authors.push_back(state.opinion(r.id).author);
  }
  out.edge_partners = sorted_unique(std::move(authors));
  return out;
}

ExposureSet select_users(const SimulationState& state, AgentId user, bool farthest) {
  const bool norm = state.params.normalize_distance;
  const IdeaVector& x = state.agents[user].idea_state;
  std::vector<Ranked> items;
  for (AgentId j : active_users(state)) {
    if (j == user) continue;
    const double d = distance(state.agents[j].idea_state, x, norm);
    items.push_back({farthest ? -d : d, j});
  }
  ExposureSet out{user, {}, {}};
  for (const Ranked& r : select_top(std::move(items), state.params.recommendation_size))
    out.edge_partners.push_back(r.id);
  std::sort(out.edge_partners.begin(), out.edge_partners.end());
  return out;
}

}  // namespace

std::vector<AgentId> active_users(const SimulationState& state) {
  std::vector<AgentId> authors;
  authors.reserve(state.round_pool.size());
  for (OpinionId id : state.round_pool) authors.push_back(state.opinion(id).author);
  return sorted_unique(std::move(authors));
}

ExposureSet strongest_connections(const SimulationState& state, AgentId user) {
  const auto row = state.weights.row(user);
  std::vector<Ranked> items;
  items.reserve(row.size());
  for (AgentId j = 0; j < row.size(); ++j)
    if (j != user) items.push_back({-row[j], j});
  ExposureSet out{user, {}, {}};
  for (const Ranked& r : select_top(std::move(items), state.params.recommendation_size))
    out.edge_partners.push_back(r.id);
  std::sort(out.edge_partners.begin(), out.edge_partners.end());
  for (OpinionId id : state.round_pool) {
    if (std::binary_search(out.edge_partners.begin(), out.edge_partners.end(),
                           state.opinion(id).author))
      out.opinions.push_back(id);
  }
  return out;
}

ExposureSet nearest_opinions(const SimulationState& state, AgentId user) {
  return select_opinions(state, user, false);
}

ExposureSet farthest_opinions(const SimulationState& state, AgentId user) {
  return select_opinions(state, user, true);
}

ExposureSet nearest_users(const SimulationState& state, AgentId user) {
  return select_users(state, user, false);
}

ExposureSet farthest_users(const SimulationState& state, AgentId user) {
  return select_users(state, user, true);
}

ExposureSet nearest_opinions_and_users(const SimulationState& state, AgentId user) {
  ExposureSet out = nearest_opinions(state, user);
  const ExposureSet users = nearest_users(state, user);
  std::vector<AgentId> merged;
  std::set_union(out.edge_partners.begin(), out.edge_partners.end(), users.edge_partners.begin(),
                 users.edge_partners.end(), std::back_inserter(merged));
  out.edge_partners = std::move(merged);
  return out;
}

ExposureSet recommend(Strategy strategy, const SimulationState& state, AgentId user) {
  switch (strategy) {
    case Strategy::SC: return strongest_connections(state, user);
    case Strategy::NO: return nearest_opinions(state, user);
    case Strategy::FO: return farthest_opinions(state, user);
    case Strategy::NU: return nearest_users(state, user);
    case Strategy::FU: return farthest_users(state, user);
    case Strategy::NOU: return nearest_opinions_and_users(state, user);
  }
  return {user, {}, {}};
}

ExposureSet recommend(const SimulationState& state, AgentId user) {
  return recommend(state.params.strategy, state, user);
}

}  // namespace recsim
