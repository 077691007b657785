#pragma once

// Network measurements: Louvain partitioning and weighted modularity on the
// symmetrized weight graph, dispersion of community idea states, and opinion
// eccentricity against the author's in-neighbourhood.

#include <cstddef>
#include <utility>
#include <vector>

#include "recsim/sampling.hpp"
#include "recsim/state.hpp"

namespace recsim {

/// Symmetric weighted graph in adjacency-list form. Diagonal entries are
/// self-loops (only created by Louvain aggregation) and count once toward
/// the node's degree.
class UndirectedWeightedGraph {
 public:
  struct Edge {
    std::size_t to;
    double weight;
  };

  UndirectedWeightedGraph() = default;
  explicit UndirectedWeightedGraph(std::size_t n) : adj_(n), loops_(n, 0.0) {}

  /// s[i][j] = (w[i][j] + w[j][i]) / 2; entries below `drop_below` omitted.
  static UndirectedWeightedGraph from_weights(const WeightMatrix& w, double drop_below = 1e-9);

  /// Adds weight to {u, v} (both directions); u == v adds a self-loop.
  void add_edge(std::size_t u, std::size_t v, double weight);

  std::size_t size() const noexcept { return adj_.size(); }
  const std::vector<Edge>& neighbors(std::size_t u) const noexcept { return adj_[u]; }
  double self_loop(std::size_t u) const noexcept { return loops_[u]; }
  double degree(std::size_t u) const noexcept;
  /// Sum of all degrees (2m).
  double total_degree() const noexcept;
  std::size_t edge_count() const noexcept;

 private:
  std::vector<std::vector<Edge>> adj_;
  std::vector<double> loops_;
};

/// Node -> community; ids dense in [0, count).
struct Partition {
  std::vector<std::size_t> assignment;
  std::size_t community_count = 0;

  /// Renumbers arbitrary labels densely in order of first appearance.
  static Partition from_labels(std::vector<std::size_t> labels);
  static Partition singletons(std::size_t n);
  static Partition single_community(std::size_t n);

  friend bool operator==(const Partition&, const Partition&) = default;
};

/// Two-phase Louvain (local moving, then aggregation) until no level gains
/// more than 1e-7. Node visit order is shuffled with `rng`.
Partition louvain(const UndirectedWeightedGraph& graph, RngStream& rng);

/// Weighted Newman modularity. 0 for a graph without edges.
double modularity(const UndirectedWeightedGraph& graph, const Partition& partition);

/// RMS distance of community mean idea vectors from their centroid.
double community_state_std(const Partition& partition, std::span<const Agent> agents,
                           bool normalize);

/// Centre of `author`'s knowledge base: recent averages of all other agents
/// weighted by their influence on the author (plain mean if all weights are 0).
IdeaVector knowledge_center(AgentId author, const SimulationState& state);

/// Distance of the opinion from its author's knowledge centre.
double eccentricity(const Opinion& opinion, const SimulationState& state);

struct MetricsRecord {
  std::size_t round = 0;
  double modularity = 0.0;
  std::size_t n_communities = 0;
  double community_std = 0.0;

  friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

/// Metrics of the current state, labelled with the round that just finished.
/// Louvain's shuffle stream is keyed by (seed, round).
MetricsRecord record_round_metrics(const SimulationState& state);

}  // namespace recsim
