#include "recsim/serialization.hpp"

#include <fstream>
#include <set>

namespace recsim {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, std::string_view where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  for (const auto& [key, value] : j.items())
    if (!known.contains(key))
      throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
}

template <typename T>
void read_key(const json& j, const char* key, T& out, std::string_view where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(where) + "." + key + ": " + e.what());
  }
}

Strategy strategy_from(const json& v, std::string_view where) {
  const auto s = parse_strategy(v.get<std::string>());
  if (!s) throw ConfigError(std::string(where) + ": unknown strategy '" + v.get<std::string>() + "'");
  return *s;
}

WeightInit weight_init_from(const json& v, std::string_view where) {
  const auto w = parse_weight_init(v.get<std::string>());
  if (!w)
    throw ConfigError(std::string(where) + ": unknown weight initializer '" +
                      v.get<std::string>() + "'");
  return *w;
}

}  // namespace

json to_json(const SimParams& p) {
  return {{"n", p.n},
          {"k", p.k},
          {"c", p.c},
          {"h", p.h},
          {"a", p.a},
          {"theta_h", p.theta_h},
          {"theta_a", p.theta_a},
          {"opinion_noise", p.opinion_noise},
          {"state_noise", p.state_noise},
          {"opinions_per_round", p.opinions_per_round},
          {"total_opinions", p.total_opinions},
          {"recommendation_size", p.recommendation_size},
          {"recent_window", p.recent_window},
          {"weight_init", to_string(p.weight_init)},
          {"power_law",
           {{"alpha", p.power_law.alpha}, {"x_min", p.power_law.x_min}, {"x_max", p.power_law.x_max}}},
          {"strategy", to_string(p.strategy)},
          {"normalize_distance", p.normalize_distance},
          {"seed", p.seed}};
}

SimParams params_from_json(const json& j, SimParams p) {
  constexpr std::string_view where = "params";
  reject_unknown(j,
                 {"n", "k", "c", "h", "a", "theta_h", "theta_a", "opinion_noise", "state_noise",
                  "opinions_per_round", "total_opinions", "recommendation_size", "recent_window",
                  "weight_init", "power_law", "strategy", "normalize_distance", "seed"},
                 where);
  read_key(j, "n", p.n, where);
  read_key(j, "k", p.k, where);
  read_key(j, "c", p.c, where);
  read_key(j, "h", p.h, where);
  read_key(j, "a", p.a, where);
  read_key(j, "theta_h", p.theta_h, where);
  read_key(j, "theta_a", p.theta_a, where);
  read_key(j, "opinion_noise", p.opinion_noise, where);
  read_key(j, "state_noise", p.state_noise, where);
  read_key(j, "opinions_per_round", p.opinions_per_round, where);
  read_key(j, "total_opinions", p.total_opinions, where);
  read_key(j, "recommendation_size", p.recommendation_size, where);
  read_key(j, "recent_window", p.recent_window, where);
  read_key(j, "normalize_distance", p.normalize_distance, where);
  read_key(j, "seed", p.seed, where);
  if (j.contains("weight_init")) p.weight_init = weight_init_from(j["weight_init"], where);
  if (j.contains("strategy")) p.strategy = strategy_from(j["strategy"], where);
  if (j.contains("power_law")) {
    const json& pl = j["power_law"];
    reject_unknown(pl, {"alpha", "x_min", "x_max"}, "params.power_law");
    read_key(pl, "alpha", p.power_law.alpha, "params.power_law");
    read_key(pl, "x_min", p.power_law.x_min, "params.power_law");
    read_key(pl, "x_max", p.power_law.x_max, "params.power_law");
  }
  return p;
}

json to_json(const ExperimentConfig& cfg) {
  json inits = json::array();
  for (WeightInit w : cfg.weight_inits) inits.push_back(to_string(w));
  json ha = json::array();
  for (auto [h, a] : cfg.homophily_novelty) ha.push_back({h, a});
  json strategies = json::array();
  for (Strategy s : cfg.strategies) strategies.push_back(to_string(s));
  return {{"master_seed", cfg.master_seed},   {"replications", cfg.replications},
          {"weight_init", std::move(inits)},  {"homophily_novelty", std::move(ha)},
          {"strategies", std::move(strategies)}, {"eccentricity", cfg.eccentricity},
          {"workers", cfg.workers},           {"output_dir", cfg.output_dir},
          {"params", to_json(cfg.base)}};
}

ExperimentConfig config_from_json(const json& j) {
  constexpr std::string_view where = "config";
  reject_unknown(j,
                 {"preset", "master_seed", "replications", "weight_init", "homophily_novelty",
                  "strategies", "eccentricity", "workers", "output_dir", "params"},
                 where);
  ExperimentConfig cfg;
  if (j.contains("preset")) {
    const std::string preset = j["preset"].get<std::string>();
    if (preset == "paper") cfg = ExperimentConfig::paper_preset();
    else if (preset == "paper_eccentricity") cfg = ExperimentConfig::paper_eccentricity_preset();
    else if (preset == "desk") cfg = ExperimentConfig::desk_preset();
    else throw ConfigError("config.preset: unknown preset '" + preset + "'");
  }
  try {
    read_key(j, "master_seed", cfg.master_seed, where);
    read_key(j, "replications", cfg.replications, where);
    read_key(j, "eccentricity", cfg.eccentricity, where);
    read_key(j, "workers", cfg.workers, where);
    read_key(j, "output_dir", cfg.output_dir, where);
    if (j.contains("weight_init")) {
      cfg.weight_inits.clear();
      for (const json& v : j["weight_init"]) cfg.weight_inits.push_back(weight_init_from(v, where));
    }
    if (j.contains("strategies")) {
      cfg.strategies.clear();
      for (const json& v : j["strategies"]) cfg.strategies.push_back(strategy_from(v, where));
    }
    if (j.contains("homophily_novelty")) {
      cfg.homophily_novelty.clear();
      for (const json& v : j["homophily_novelty"]) {
        if (!v.is_array() || v.size() != 2)
          throw ConfigError("config.homophily_novelty: entries must be [h, a] pairs");
        cfg.homophily_novelty.emplace_back(v[0].get<double>(), v[1].get<double>());
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (j.contains("params")) cfg.base = params_from_json(j["params"], cfg.base);
  try {
    cfg.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

json snapshot(const SimulationState& st) {
  json agents = json::array();
  for (const Agent& ag : st.agents) {
    json recent = json::array();
    for (const Opinion& op : ag.recent_opinions) recent.push_back(op.id);
    agents.push_back({{"id", ag.id}, {"idea_state", ag.idea_state.values()}, {"recent", recent}});
  }
  json weights = json::array();
  for (std::size_t i = 0; i < st.weights.size(); ++i) {
    const auto row = st.weights.row(i);
    weights.push_back(std::vector<double>(row.begin(), row.end()));
  }
  json log = json::array();
  for (const Opinion& op : st.opinion_log)
    log.push_back({{"id", op.id}, {"author", op.author}, {"round", op.round},
                   {"content", op.content.values()}});
  return {{"params", to_json(st.params)},
          {"round_counter", st.round_counter},
          {"rng", {{"seed", st.rng.seed()}, {"state", st.rng.words()}}},
          {"agents", std::move(agents)},
          {"weights", std::move(weights)},
          {"opinions", std::move(log)},
          {"round_pool", st.round_pool}};
}

SimulationState restore_snapshot(const json& j) {
  SimulationState st;
  st.params = params_from_json(j.at("params"));
  st.round_counter = j.at("round_counter").get<std::size_t>();
  st.rng = RngStream::restore(j.at("rng").at("seed").get<std::uint64_t>(),
                              j.at("rng").at("state").get<std::array<std::uint64_t, 4>>());
  for (const json& op : j.at("opinions")) {
    st.opinion_log.push_back({op.at("id").get<std::size_t>(), op.at("author").get<std::size_t>(),
                              IdeaVector(op.at("content").get<std::vector<double>>()),
                              op.at("round").get<std::size_t>()});
  }
  for (const json& a : j.at("agents")) {
    Agent ag;
    ag.id = a.at("id").get<std::size_t>();
    ag.idea_state = IdeaVector(a.at("idea_state").get<std::vector<double>>());
    for (const json& id : a.at("recent")) ag.recent_opinions.push_back(st.opinion(id.get<std::size_t>()));
    st.agents.push_back(std::move(ag));
  }
  const auto& rows = j.at("weights");
  st.weights = WeightMatrix(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto row = rows[i].get<std::vector<double>>();
    for (std::size_t jj = 0; jj < row.size(); ++jj) st.weights.at(i, jj) = row[jj];
  }
  st.round_pool = j.at("round_pool").get<std::vector<OpinionId>>();
  return st;
}

}  // namespace recsim
