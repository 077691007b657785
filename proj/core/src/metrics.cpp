#include "recsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace recsim {

UndirectedWeightedGraph UndirectedWeightedGraph::from_weights(const WeightMatrix& w,
                                                              double drop_below) {
  const std::size_t n = w.size();
  UndirectedWeightedGraph g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = 0.5 * (w.at(i, j) + w.at(j, i));
      if (s >= drop_below) g.add_edge(i, j, s);
    }
  }
  return g;
}

void UndirectedWeightedGraph::add_edge(std::size_t u, std::size_t v, double weight) {
  if (u == v) {
    loops_[u] += weight;
    return;
  }
  auto bump = [weight](std::vector<Edge>& list, std::size_t to) {
    for (Edge& e : list) {
      if (e.to == to) {
        e.weight += weight;
        return;
      }
    }
    list.push_back({to, weight});
  };
  bump(adj_[u], v);
  bump(adj_[v], u);
}

double UndirectedWeightedGraph::degree(std::size_t u) const noexcept {
  double d = loops_[u];
  for (const Edge& e : adj_[u]) d += e.weight;
  return d;
}

double UndirectedWeightedGraph::total_degree() const noexcept {
  double total = 0.0;
  for (std::size_t u = 0; u < size(); ++u) total += degree(u);
  return total;
}

std::size_t UndirectedWeightedGraph::edge_count() const noexcept {
  std::size_t count = 0;
  for (std::size_t u = 0; u < size(); ++u) {
    count += adj_[u].size();
    if (loops_[u] != 0.0) count += 2;
  }
  return count / 2;
}

Partition Partition::from_labels(std::vector<std::size_t> labels) {
  std::unordered_map<std::size_t, std::size_t> remap;
  for (std::size_t& l : labels) {
    auto [it, inserted] = remap.try_emplace(l, remap.size());
    l = it->second;
  }
  return {std::move(labels), remap.size()};
}

Partition Partition::singletons(std::size_t n) {
  std::vector<std::size_t> labels(n);
  std::iota(labels.begin(), labels.end(), std::size_t{0});
  return {std::move(labels), n};
}

Partition Partition::single_community(std::size_t n) {
  return {std::vector<std::size_t>(n, 0), n > 0 ? 1u : 0u};
}

double modularity(const UndirectedWeightedGraph& graph, const Partition& partition) {
  const double two_m = graph.total_degree();
  if (two_m <= 0.0) return 0.0;
  std::vector<double> internal(partition.community_count, 0.0);
  std::vector<double> total(partition.community_count, 0.0);
  for (std::size_t u = 0; u < graph.size(); ++u) {
    const std::size_t cu = partition.assignment[u];
    total[cu] += graph.degree(u);
    internal[cu] += graph.self_loop(u);
    for (const auto& e : graph.neighbors(u))
      if (partition.assignment[e.to] == cu) internal[cu] += e.weight;
  }
  double q = 0.0;
  for (std::size_t c = 0; c < partition.community_count; ++c)
    q += internal[c] / two_m - (total[c] / two_m) * (total[c] / two_m);
  return q;
}

namespace {

constexpr double kMinGain = 1e-7;

// One level of local moving. Returns the community of each node (not dense).
std::vector<std::size_t> local_moves(const UndirectedWeightedGraph& g, RngStream& rng) {
  const std::size_t n = g.size();
  const double two_m = g.total_degree();
  std::vector<std::size_t> comm(n);
  std::iota(comm.begin(), comm.end(), std::size_t{0});
  std::vector<double> degree(n);
  std::vector<double> tot(n);
  for (std::size_t u = 0; u < n; ++u) tot[u] = degree[u] = g.degree(u);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

  std::vector<double> link(n, -1.0);
  std::vector<std::size_t> touched;
  double q = modularity(g, Partition{comm, n});
  while (true) {
    bool moved = false;
    for (std::size_t u : order) {
      const std::size_t own = comm[u];
      touched.clear();
      link[own] = 0.0;
      touched.push_back(own);
      for (const auto& e : g.neighbors(u)) {
        const std::size_t c = comm[e.to];
        if (link[c] < 0.0) {
          link[c] = 0.0;
          touched.push_back(c);
        }
        link[c] += e.weight;
      }
      tot[own] -= degree[u];
      std::size_t best = own;
      double best_gain = link[own] - tot[own] * degree[u] / two_m;
      for (std::size_t c : touched) {
        const double gain = link[c] - tot[c] * degree[u] / two_m;
        if (gain > best_gain) {
          best_gain = gain;
          best = c;
        }
      }
      tot[best] += degree[u];
      if (best != own) {
        comm[u] = best;
        moved = true;
      }
      for (std::size_t c : touched) link[c] = -1.0;
    }
    if (!moved) break;
    const double next_q = modularity(g, Partition::from_labels(comm));
    if (next_q - q <= kMinGain) break;
    q = next_q;
  }
  return comm;
}

UndirectedWeightedGraph aggregate(const UndirectedWeightedGraph& g, const Partition& p) {
  UndirectedWeightedGraph out(p.community_count);
  for (std::size_t u = 0; u < g.size(); ++u) {
    const std::size_t cu = p.assignment[u];
    if (g.self_loop(u) != 0.0) out.add_edge(cu, cu, g.self_loop(u));
    for (const auto& e : g.neighbors(u)) {
      if (e.to < u) continue;
      const std::size_t cv = p.assignment[e.to];
      // An internal edge contributes to both endpoints' degrees, i.e. twice
      // to the aggregated self-loop.
      out.add_edge(cu, cv, cu == cv ? 2.0 * e.weight : e.weight);
    }
  }
  return out;
}

}  // namespace

Partition louvain(const UndirectedWeightedGraph& graph, RngStream& rng) {
  const std::size_t n = graph.size();
  if (n == 0) return {};
  if (graph.total_degree() <= 0.0) return Partition::singletons(n);

  Partition result = Partition::singletons(n);
  UndirectedWeightedGraph level = graph;
  double q = modularity(graph, result);
  while (true) {
    const Partition moved = Partition::from_labels(local_moves(level, rng));
    if (moved.community_count == level.size()) break;
    Partition candidate = result;
    for (std::size_t& c : candidate.assignment) c = moved.assignment[c];
    candidate.community_count = moved.community_count;
    const double next_q = modularity(graph, candidate);
    if (next_q - q <= kMinGain) break;
    result = std::move(candidate);
    q = next_q;
    level = aggregate(level, moved);
  }
  return Partition::from_labels(std::move(result.assignment));
}

double community_state_std(const Partition& partition, std::span<const Agent> agents,
                           bool normalize) {
  if (partition.community_count == 0 || agents.empty()) return 0.0;
  const std::size_t k = agents.front().idea_state.size();
  std::vector<IdeaVector> means(partition.community_count, IdeaVector(k));
  std::vector<std::size_t> sizes(partition.community_count, 0);
  for (const Agent& ag : agents) {
    const std::size_t c = partition.assignment.at(ag.id);
    means[c] += ag.idea_state.components();
    ++sizes[c];
  }
  IdeaVector centroid(k);
  for (std::size_t c = 0; c < means.size(); ++c) {
    means[c] *= 1.0 / static_cast<double>(sizes[c]);
    centroid += means[c].components();
  }
  centroid *= 1.0 / static_cast<double>(means.size());
  double acc = 0.0;
  for (const IdeaVector& mu : means) {
    const double d = distance(mu, centroid, normalize);
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(means.size()));
}

IdeaVector knowledge_center(AgentId author, const SimulationState& state) {
  const std::size_t k = state.params.k;
  IdeaVector weighted(k);
  IdeaVector plain(k);
  double total = 0.0;
  const auto row = state.weights.row(author);
  for (const Agent& ag : state.agents) {
    if (ag.id == author) continue;
    const IdeaVector rec = recent_average(ag);
    for (std::size_t d = 0; d < k; ++d) weighted[d] += row[ag.id] * rec[d];
    plain += rec.components();
    total += row[ag.id];
  }
  if (total > 0.0) {
    weighted *= 1.0 / total;
    return weighted;
  }
  plain *= 1.0 / static_cast<double>(state.agents.size() - 1);
  return plain;
}

double eccentricity(const Opinion& opinion, const SimulationState& state) {
  return distance(opinion.content, knowledge_center(opinion.author, state),
                  state.params.normalize_distance);
}

MetricsRecord record_round_metrics(const SimulationState& state) {
  const auto graph = UndirectedWeightedGraph::from_weights(state.weights);
  const std::size_t round = state.round_counter == 0 ? 0 : state.round_counter - 1;
  RngStream rng = RngStream::keyed(state.params.seed, {0x4c4f5556ULL, round});
  const Partition part = louvain(graph, rng);
  MetricsRecord rec;
  rec.round = round;
  rec.modularity = modularity(graph, part);
  rec.n_communities = part.community_count;
  rec.community_std = community_state_std(part, state.agents, state.params.normalize_distance);
  return rec;
}

}  // namespace recsim
