#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>

#include "recsim/dynamics.hpp"
#include "recsim/metrics.hpp"
#include "recsim/serialization.hpp"
#include "recsim/state.hpp"

using namespace recsim;

namespace {

SimParams small(std::size_t n, WeightInit init, std::uint64_t seed) {
  SimParams p;
  p.n = n;
  p.weight_init = init;
  p.seed = seed;
  return p;
}

Opinion op_with(OpinionId id, AgentId author, IdeaVector content) {
  return {id, author, std::move(content), 0};
}

}  // namespace

TEST_CASE("init_network, uniform weights, n = 3") {
  const auto st = init_network(small(3, WeightInit::uniform, 1));
  REQUIRE(st.agents.size() == 3);
  REQUIRE(st.weights.size() == 3);
  for (const Agent& ag : st.agents) {
    REQUIRE(ag.idea_state.size() == 15);
    CHECK(ag.recent_opinions.empty());
    for (double x : ag.idea_state) {
      CHECK(x >= 0.0);
      CHECK(x < 1.0);
    }
  }
  int off_diagonal = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i == j) {
        CHECK(st.weights.at(i, j) == 0.0);
        continue;
      }
      ++off_diagonal;
      CHECK(st.weights.at(i, j) >= 0.0);
      CHECK(st.weights.at(i, j) <= 1.0);
    }
  }
  CHECK(off_diagonal == 6);
  CHECK(st.opinion_log.empty());
  CHECK(st.round_pool.empty());
  CHECK(st.round_counter == 0);
}

TEST_CASE("init_network, power-law weights within bounds") {
  const auto st = init_network(small(100, WeightInit::power_law, 5));
  double lo = 1.0, hi = 0.0;
  for (std::size_t i = 0; i < 100; ++i)
    for (std::size_t j = 0; j < 100; ++j)
      if (i != j) {
        lo = std::min(lo, st.weights.at(i, j));
        hi = std::max(hi, st.weights.at(i, j));
      }
  CHECK(lo >= 1e-6);
  CHECK(hi <= 1.0);
  // Heavy tail: most weights are tiny.
  std::size_t tiny = 0;
  for (double w : st.weights.data()) tiny += w < 1e-4;
  CHECK(tiny > 100 * 99 / 2);
}

TEST_CASE("init_network is a pure function of the params") {
  const auto p = small(20, WeightInit::power_law, 99);
  CHECK(init_network(p) == init_network(p));
  auto q = p;
  q.seed = 100;
  CHECK_FALSE(init_network(p) == init_network(q));
}

TEST_CASE("SimParams validation") {
  CHECK_NOTHROW(SimParams{}.validate());
  const auto rejects = [](auto mutate) {
    SimParams p;
    mutate(p);
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  };
  rejects([](SimParams& p) { p.n = 1; });
  rejects([](SimParams& p) { p.k = 0; });
  rejects([](SimParams& p) { p.c = -0.1; });
  rejects([](SimParams& p) { p.h = -1; });
  rejects([](SimParams& p) { p.theta_a = -0.5; });
  rejects([](SimParams& p) { p.total_opinions = 150; });
  rejects([](SimParams& p) { p.opinions_per_round = 0; });
  rejects([](SimParams& p) { p.opinion_noise = -0.1; });
  rejects([](SimParams& p) {
    p.weight_init = WeightInit::power_law;
    p.power_law.alpha = 0.5;
  });
  CHECK(SimParams{}.rounds() == 30);
}

TEST_CASE("recent buffer is FIFO with a window") {
  Agent ag{0, IdeaVector(2), {}};
  for (OpinionId id = 1; id <= 11; ++id) ag.remember(op_with(id, 0, {double(id), 0.0}), 10);
  REQUIRE(ag.recent_opinions.size() == 10);
  CHECK(ag.recent_opinions.front().id == 2);
  CHECK(ag.recent_opinions.back().id == 11);
}

TEST_CASE("recent_average") {
  Agent ag{0, IdeaVector{0.3, 0.7}, {}};

  SUBCASE("empty buffer falls back to the idea state") {
    CHECK(recent_average(ag) == IdeaVector{0.3, 0.7});
  }
  SUBCASE("single opinion") {
    ag.remember(op_with(0, 0, {0.25, 0.5}), 10);
    CHECK(recent_average(ag) == IdeaVector{0.25, 0.5});
  }
  SUBCASE("mean of the buffer") {
    Agent wide{0, IdeaVector(15), {}};
    wide.remember(op_with(0, 0, IdeaVector(15, 0.0)), 10);
    wide.remember(op_with(1, 0, IdeaVector(15, 1.0)), 10);
    CHECK(recent_average(wide) == IdeaVector(15, 0.5));
  }
  SUBCASE("identical entries average to themselves") {
    for (OpinionId id = 0; id < 7; ++id) ag.remember(op_with(id, 0, {0.1, 0.9}), 10);
    const auto avg = recent_average(ag);
    CHECK(avg[0] == doctest::Approx(0.1));
    CHECK(avg[1] == doctest::Approx(0.9));
  }
}

TEST_CASE("exposed_average") {
  WeightMatrix w(3);
  w.at(0, 1) = 1.0;
  w.at(0, 2) = 3.0;
  const Opinion v1 = op_with(0, 1, {0.2, 0.4});
  const Opinion v2 = op_with(1, 2, {0.6, 0.0});

  SUBCASE("empty exposure") { CHECK_FALSE(exposed_average(0, {}, w).has_value()); }

  SUBCASE("single opinion") {
    const Opinion* ops[] = {&v1};
    CHECK(*exposed_average(0, ops, w) == IdeaVector{0.2, 0.4});
  }

  SUBCASE("weights 1 and 3") {
    const Opinion* ops[] = {&v1, &v2};
    const auto avg = *exposed_average(0, ops, w);
    CHECK(avg[0] == doctest::Approx((0.2 + 3 * 0.6) / 4));
    CHECK(avg[1] == doctest::Approx((0.4 + 3 * 0.0) / 4));
  }

  SUBCASE("all weights zero gives the plain mean") {
    const Opinion* ops[] = {&v1, &v2};
    const auto avg = *exposed_average(1, ops, WeightMatrix(3));
    CHECK(avg[0] == doctest::Approx(0.4));
    CHECK(avg[1] == doctest::Approx(0.2));
  }

  SUBCASE("inside the convex hull") {
    RngStream rng(4);
    WeightMatrix rw(6);
    std::vector<Opinion> pool;
    for (AgentId j = 1; j < 6; ++j) {
      rw.at(0, j) = rng.uniform01();
      pool.push_back(op_with(j, j, IdeaVector(fluctuation(rng, 4, 1.0))));
    }
    std::vector<const Opinion*> ops;
    for (const auto& o : pool) ops.push_back(&o);
    const auto avg = *exposed_average(0, ops, rw);
    for (std::size_t d = 0; d < 4; ++d) {
      double lo = 1e9, hi = -1e9;
      for (const auto& o : pool) {
        lo = std::min(lo, o.content[d]);
        hi = std::max(hi, o.content[d]);
      }
      CHECK(avg[d] >= lo - 1e-12);
      CHECK(avg[d] <= hi + 1e-12);
    }
  }
}

TEST_CASE("distance") {
  const IdeaVector zero(15, 0.0), one(15, 1.0);
  CHECK(distance(one, one, false) == 0.0);
  CHECK(distance(zero, one, false) == doctest::Approx(3.872983346207417));
  CHECK(distance(zero, one, true) == doctest::Approx(1.0));
  CHECK(distance(IdeaVector{0, 0}, IdeaVector{3, 4}, false) == doctest::Approx(5.0));
}

TEST_CASE("weights are clamped to the unit interval with a zero diagonal") {
  WeightMatrix w(2);
  w.at(0, 0) = 0.4;
  w.at(0, 1) = 1.7;
  w.at(1, 0) = -0.2;
  w.clamp_unit();
  CHECK(w.at(0, 0) == 0.0);
  CHECK(w.at(0, 1) == 1.0);
  CHECK(w.at(1, 0) == 0.0);
}

TEST_CASE("strategy and initializer names round-trip") {
  for (Strategy s : kAllStrategies) CHECK(parse_strategy(to_string(s)) == s);
  CHECK_FALSE(parse_strategy("XX").has_value());
  CHECK(parse_weight_init("power_law") == WeightInit::power_law);
  CHECK(parse_weight_init("uniform") == WeightInit::uniform);
  CHECK_FALSE(parse_weight_init("pareto").has_value());
}

TEST_CASE("snapshot round trip resumes the same trajectory") {
  SimParams p = small(12, WeightInit::power_law, 21);
  p.opinions_per_round = 12;
  p.total_opinions = 120;
  SimulationState a = init_network(p);
  for (int r = 0; r < 3; ++r) run_round(a);

  SimulationState b = restore_snapshot(nlohmann::json::parse(snapshot(a).dump()));
  CHECK(a == b);
  for (int r = 0; r < 3; ++r) {
    run_round(a);
    run_round(b);
  }
  CHECK(a == b);
}

TEST_CASE("golden seed trajectory") {
  // Regression file written once from a reviewed build; regenerate with
  // RECSIM_UPDATE_GOLDEN=1 only when the trajectory is meant to change.
  SimParams p = small(10, WeightInit::uniform, 7);
  p.k = 3;
  p.opinions_per_round = 10;
  p.total_opinions = 50;
  p.recommendation_size = 4;
  p.strategy = Strategy::NOU;

  SimulationState st = init_network(p);
  nlohmann::json metrics = nlohmann::json::array();
  for (std::size_t r = 0; r < p.rounds(); ++r) {
    run_round(st);
    const MetricsRecord m = record_round_metrics(st);
    metrics.push_back({m.round, m.modularity, m.n_communities, m.community_std});
  }
  const nlohmann::json actual = {{"metrics", metrics}, {"final_state", snapshot(st)}};

  const std::string path = std::string(RECSIM_TEST_DATA_DIR) + "/golden_seed7.json";
  if (std::getenv("RECSIM_UPDATE_GOLDEN")) {
    std::ofstream(path) << actual.dump(1) << '\n';
  }
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "missing " << path);
  const auto expected = nlohmann::json::parse(in);
  CHECK(expected == actual);
}
