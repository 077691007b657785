#pragma once

// Network domain types: idea vectors, opinions, agents, the directed weight
// matrix, run parameters and the mutable simulation state.

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "recsim/sampling.hpp"

namespace recsim {

using AgentId = std::size_t;
using OpinionId = std::size_t;

/// Point in R^k. Components start in [0,1] but are not clamped afterwards.
class IdeaVector {
 public:
  IdeaVector() = default;
  explicit IdeaVector(std::size_t k, double fill = 0.0) : x_(k, fill) {}
  explicit IdeaVector(std::vector<double> components) : x_(std::move(components)) {}
  IdeaVector(std::initializer_list<double> components) : x_(components) {}

  std::size_t size() const noexcept { return x_.size(); }
  double& operator[](std::size_t i) noexcept { return x_[i]; }
  double operator[](std::size_t i) const noexcept { return x_[i]; }
  std::span<const double> components() const noexcept { return x_; }
  const std::vector<double>& values() const noexcept { return x_; }

  auto begin() const noexcept { return x_.begin(); }
  auto end() const noexcept { return x_.end(); }

  IdeaVector& operator+=(std::span<const double> d);
  IdeaVector& operator-=(std::span<const double> d);
  IdeaVector& operator*=(double s) noexcept;

  bool all_finite() const noexcept;

  friend bool operator==(const IdeaVector&, const IdeaVector&) = default;

 private:
  std::vector<double> x_;
};

struct Opinion {
  OpinionId id = 0;
  AgentId author = 0;
  IdeaVector content;
  std::size_t round = 0;

  friend bool operator==(const Opinion&, const Opinion&) = default;
};

struct Agent {
  AgentId id = 0;
  IdeaVector idea_state;
  /// Own most recent opinions, oldest first.
  std::deque<Opinion> recent_opinions;

  /// Appends and evicts from the front beyond `window` entries.
  void remember(Opinion op, std::size_t window);

  friend bool operator==(const Agent&, const Agent&) = default;
};

/// Dense directed weights; at(i, j) is the influence of author j on user i.
class WeightMatrix {
 public:
  WeightMatrix() = default;
  explicit WeightMatrix(std::size_t n) : n_(n), w_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double& at(AgentId i, AgentId j) noexcept { return w_[i * n_ + j]; }
  double at(AgentId i, AgentId j) const noexcept { return w_[i * n_ + j]; }

  /// Incoming weights of user i (entry j is the weight of j -> i).
  std::span<const double> row(AgentId i) const noexcept { return {w_.data() + i * n_, n_}; }
  std::span<const double> data() const noexcept { return w_; }

  void clamp_unit() noexcept;

  friend bool operator==(const WeightMatrix&, const WeightMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> w_;
};

enum class Strategy { SC, NO, FO, NU, FU, NOU };
enum class WeightInit { uniform, power_law };

inline constexpr Strategy kAllStrategies[] = {Strategy::SC, Strategy::NO, Strategy::FO,
                                              Strategy::NU, Strategy::FU, Strategy::NOU};

std::string_view to_string(Strategy s) noexcept;
std::string_view to_string(WeightInit w) noexcept;
std::optional<Strategy> parse_strategy(std::string_view name) noexcept;
std::optional<WeightInit> parse_weight_init(std::string_view name) noexcept;

struct SimParams {
  std::size_t n = 100;
  std::size_t k = 15;
  double c = 0.01;
  double h = 0.3;
  double a = 0.01;
  double theta_h = 0.1;
  double theta_a = 0.1;
  double opinion_noise = 0.1;
  double state_noise = 0.01;
  std::size_t opinions_per_round = 100;
  std::size_t total_opinions = 3000;
  std::size_t recommendation_size = 20;
  std::size_t recent_window = 10;
  WeightInit weight_init = WeightInit::uniform;
  PowerLawSpec power_law{};
  Strategy strategy = Strategy::SC;
  bool normalize_distance = true;
  std::uint64_t seed = 0;

  std::size_t rounds() const noexcept { return total_opinions / opinions_per_round; }

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  friend bool operator==(const SimParams&, const SimParams&) = default;
};

struct SimulationState {
  SimParams params;
  std::vector<Agent> agents;
  WeightMatrix weights;
  std::vector<Opinion> opinion_log;
  /// Indices into opinion_log for the current round.
  std::vector<OpinionId> round_pool;
  RngStream rng;
  std::size_t round_counter = 0;

  const Opinion& opinion(OpinionId id) const { return opinion_log.at(id); }

  friend bool operator==(const SimulationState&, const SimulationState&) = default;
};

/// Fully connected network: idea components ~ U(0,1), off-diagonal weights
/// from the configured initializer, zero diagonal.
SimulationState init_network(const SimParams& params);

/// Mean of the agent's recent opinions, or its idea state if it has none.
IdeaVector recent_average(const Agent& agent);

/// Weighted mean of opinion contents with weights w[user][author]. Falls back
/// to the plain mean when every weight is zero. Returns nullopt for an empty
/// exposure.
std::optional<IdeaVector> exposed_average(AgentId user, std::span<const Opinion* const> exposure,
                                          const WeightMatrix& weights);

/// Euclidean distance, divided by sqrt(k) when normalize is set.
double distance(std::span<const double> x, std::span<const double> y, bool normalize) noexcept;
inline double distance(const IdeaVector& x, const IdeaVector& y, bool normalize) noexcept {
  return distance(x.components(), y.components(), normalize);
}

}  // namespace recsim
