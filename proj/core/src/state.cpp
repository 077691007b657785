#include "recsim/state.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace recsim {

IdeaVector& IdeaVector::operator+=(std::span<const double> d) {
  assert(d.size() == x_.size());
  for (std::size_t i = 0; i < x_.size(); ++i) x_[i] += d[i];
  return *this;
}

IdeaVector& IdeaVector::operator-=(std::span<const double> d) {
  assert(d.size() == x_.size());
  for (std::size_t i = 0; i < x_.size(); ++i) x_[i] -= d[i];
  return *this;
}

IdeaVector& IdeaVector::operator*=(double s) noexcept {
  for (double& v : x_) v *= s;
  return *this;
}

bool IdeaVector::all_finite() const noexcept {
  return std::all_of(x_.begin(), x_.end(), [](double v) { return std::isfinite(v); });
}

void Agent::remember(Opinion op, std::size_t window) {
  recent_opinions.push_back(std::move(op));
  while (recent_opinions.size() > window) recent_opinions.pop_front();
}

void WeightMatrix::clamp_unit() noexcept {
  for (double& v : w_) v = std::clamp(v, 0.0, 1.0);
  for (std::size_t i = 0; i < n_; ++i) w_[i * n_ + i] = 0.0;
}

std::string_view to_string(Strategy s) noexcept {
  switch (s) {
    case Strategy::SC: return "SC";
    case Strategy::NO: return "NO";
    case Strategy::FO: return "FO";
    case Strategy::NU: return "NU";
    case Strategy::FU: return "FU";
    case Strategy::NOU: return "NOU";
  }
  return "?";
}

std::string_view to_string(WeightInit w) noexcept {
  return w == WeightInit::uniform ? "uniform" : "power_law";
}

std::optional<Strategy> parse_strategy(std::string_view name) noexcept {
  for (Strategy s : kAllStrategies)
    if (to_string(s) == name) return s;
  return std::nullopt;
}

std::optional<WeightInit> parse_weight_init(std::string_view name) noexcept {
  if (name == "uniform") return WeightInit::uniform;
  if (name == "power_law") return WeightInit::power_law;
  return std::nullopt;
}

void SimParams::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (n < 2) fail("n must be >= 2");
  if (k < 1) fail("k must be >= 1");
  if (recommendation_size < 1) fail("recommendation_size must be >= 1");
  if (recent_window < 1) fail("recent_window must be >= 1");
  if (opinions_per_round < 1) fail("opinions_per_round must be >= 1");
  if (total_opinions % opinions_per_round != 0)
    fail("opinions_per_round must divide total_opinions");
  if (!(c >= 0)) fail("c must be >= 0");
  if (!(h >= 0)) fail("h must be >= 0");
  if (!(a >= 0)) fail("a must be >= 0");
  if (!(theta_h >= 0)) fail("theta_h must be >= 0");
  if (!(theta_a >= 0)) fail("theta_a must be >= 0");
  if (!(opinion_noise >= 0)) fail("opinion_noise must be >= 0");
  if (!(state_noise >= 0)) fail("state_noise must be >= 0");
  if (weight_init == WeightInit::power_law) power_law.validate();
}

SimulationState init_network(const SimParams& params) {
  params.validate();
  SimulationState st;
  st.params = params;
  st.rng = RngStream(params.seed);
  st.agents.resize(params.n);
  for (AgentId i = 0; i < params.n; ++i) {
    Agent& ag = st.agents[i];
    ag.id = i;
    ag.idea_state = IdeaVector(params.k);
    for (std::size_t d = 0; d < params.k; ++d) ag.idea_state[d] = st.rng.uniform01();
  }
  st.weights = WeightMatrix(params.n);
  for (AgentId i = 0; i < params.n; ++i) {
    for (AgentId j = 0; j < params.n; ++j) {
      if (i == j) continue;
      st.weights.at(i, j) = params.weight_init == WeightInit::uniform
                                ? st.rng.uniform01()
                                : power_law_weight(st.rng, params.power_law);
    }
  }
  st.opinion_log.reserve(params.total_opinions);
  st.round_pool.reserve(params.opinions_per_round);
  return st;
}

IdeaVector recent_average(const Agent& agent) {
  if (agent.recent_opinions.empty()) return agent.idea_state;
  IdeaVector mean(agent.idea_state.size());
  for (const Opinion& op : agent.recent_opinions) mean += op.content.components();
  mean *= 1.0 / static_cast<double>(agent.recent_opinions.size());
  return mean;
}

std::optional<IdeaVector> exposed_average(AgentId user, std::span<const Opinion* const> exposure,
                                          const WeightMatrix& weights) {
  if (exposure.empty()) return std::nullopt;
  const std::size_t k = exposure.front()->content.size();
  IdeaVector sum(k);
  double total = 0.0;
  for (const Opinion* op : exposure) {
    const double w = weights.at(user, op->author);
    for (std::size_t d = 0; d < k; ++d) sum[d] += w * op->content[d];
    total += w;
  }
  if (total > 0.0) {
    sum *= 1.0 / total;
    return sum;
  }
  IdeaVector mean(k);
  for (const Opinion* op : exposure) mean += op->content.components();
  mean *= 1.0 / static_cast<double>(exposure.size());
  return mean;
}

double distance(std::span<const double> x, std::span<const double> y, bool normalize) noexcept {
  assert(x.size() == y.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    acc += d * d;
  }
  const double dist = std::sqrt(acc);
  return normalize ? dist / std::sqrt(static_cast<double>(x.size())) : dist;
}

}  // namespace recsim
