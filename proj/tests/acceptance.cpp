// Acceptance suite. Runs the desk sweep plus the oracle checks and prints one
// PASS/FAIL line per criterion. Exit status is the number of failed criteria
// (capped at 125).
//
//   acceptance [output_dir]      default: ./acceptance_results

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "power_law_fit.hpp"
#include "recsim/dynamics.hpp"
#include "recsim/harness.hpp"
#include "recsim/metrics.hpp"
#include "recsim/report.hpp"
#include "recsim/sampling.hpp"
#include "round_oracle_data.hpp"

namespace fs = std::filesystem;
using namespace recsim;

namespace {

// Pinned tolerances.
constexpr double kAlpha = 0.05;
constexpr double kExceptionMedianGap = 0.1;
constexpr double kSlopeTolerance = 0.1;
constexpr double kLouvainGap = 0.02;
constexpr double kEquationTolerance = 1e-12;

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
};

class Board {
 public:
  void report(const std::string& name, const Verdict& v) {
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << '\n';
    for (std::size_t i = 0; i < v.notes.size() && i < 12; ++i)
      std::cout << "       " << v.notes[i] << '\n';
    if (v.notes.size() > 12) std::cout << "       ... " << v.notes.size() - 12 << " more\n";
    std::cout.flush();
    failed_ += v.pass ? 0 : 1;
  }
  int failed() const { return failed_; }

 private:
  int failed_ = 0;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string label(const Cell& c) {
  return std::string(to_string(c.weight_init)) + " h=" + format_real(c.h) + " a=" + format_real(c.a);
}

const Strategy kOpinion[] = {Strategy::NO, Strategy::FO};
const Strategy kBaseline[] = {Strategy::SC, Strategy::NU, Strategy::FU};

double median_of(const SweepTable& t, Metric m, const Cell& c, Strategy s) {
  return stats::median(metric_sample(t, m, c, s));
}

std::string medians_line(const SweepTable& t, Metric m, const Cell& c) {
  std::string line = label(c) + " medians:";
  for (Strategy s : kAllStrategies) line += " " + std::string(to_string(s)) + "=" + fmt(median_of(t, m, c, s));
  return line;
}

/// NO and FO medians strictly below (or, with `above`, above) every baseline.
void check_direction(Verdict& v, const SweepTable& t, Metric m, const Cell& c, bool above) {
  bool ok = true;
  for (Strategy o : kOpinion)
    for (Strategy b : kBaseline) {
      const double mo = median_of(t, m, c, o), mb = median_of(t, m, c, b);
      if (above ? !(mo > mb) : !(mo < mb)) {
        ok = false;
        v.require(false, label(c) + ": median " + std::string(to_string(o)) + " " + fmt(mo) +
                             (above ? " <= " : " >= ") + std::string(to_string(b)) + " " + fmt(mb));
      }
    }
  if (ok) v.notes.push_back(medians_line(t, m, c));
}

void check_significance(Verdict& v, const SweepTable& t, Metric m, const Cell& c) {
  const ComparisonReport rep = compare_strategies(t, m, c);
  v.require(rep.status == ComparisonReport::Status::ok, label(c) + ": comparison " + rep.message);
  for (const PairTest& pt : rep.tests) {
    if (std::find(std::begin(kBaseline), std::end(kBaseline), pt.second) == std::end(kBaseline))
      continue;
    v.require(pt.result.p < kAlpha, label(c) + ": " + std::string(to_string(pt.first)) + " vs " +
                                        std::string(to_string(pt.second)) + " p=" +
                                        fmt(pt.result.p) + " (need < " + fmt(kAlpha, 2) + ")");
  }
}

void check_exception(Verdict& v, const SweepTable& t, Metric m, const Cell& c) {
  double lo = 1e300, hi = -1e300;
  for (Strategy s : kAllStrategies) {
    lo = std::min(lo, median_of(t, m, c, s));
    hi = std::max(hi, median_of(t, m, c, s));
  }
  v.require(hi - lo <= kExceptionMedianGap,
            label(c) + ": median spread " + fmt(hi - lo) + " > " + fmt(kExceptionMedianGap, 2));
  const ComparisonReport rep = compare_strategies(t, m, c);
  for (const PairTest& pt : rep.tests) {
    if (std::find(std::begin(kBaseline), std::end(kBaseline), pt.second) == std::end(kBaseline))
      continue;
    v.require(!(pt.result.p < kAlpha), label(c) + ": " + std::string(to_string(pt.first)) +
                                           " vs " + std::string(to_string(pt.second)) +
                                           " significant, p=" + fmt(pt.result.p));
  }
  if (v.pass) v.notes.push_back(medians_line(t, m, c));
}

/// Checks the invariants after every round of a run.
struct InvariantMonitor {
  std::size_t opinions_per_round = 0;
  std::size_t window = 0;
  std::size_t rounds_checked = 0;
  std::vector<std::string> violations;

  void operator()(const SimulationState& st, const MetricsRecord& m) {
    ++rounds_checked;
    auto note = [&](const std::string& what) {
      if (violations.size() < 50)
        violations.push_back("seed " + std::to_string(st.params.seed) + " round " +
                             std::to_string(m.round) + ": " + what);
    };
    const std::size_t n = st.weights.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (st.weights.at(i, i) != 0.0) note("non-zero diagonal");
      for (std::size_t j = 0; j < n; ++j) {
        const double w = st.weights.at(i, j);
        if (!(w >= 0.0 && w <= 1.0)) note("weight outside [0,1]");
      }
    }
    if (st.opinion_log.size() != st.round_counter * opinions_per_round) note("opinion count");
    for (const Agent& ag : st.agents)
      if (ag.recent_opinions.size() > window) note("recent buffer over window");
    if (!std::isfinite(m.modularity) || !std::isfinite(m.community_std)) note("non-finite metric");
    if (!(m.modularity >= -0.5 && m.modularity <= 1.0)) note("modularity outside [-0.5, 1]");
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Verdict power_law_sampler() {
  Verdict v;
  const PowerLawSpec spec{};
  RngStream rng(20240601);
  std::vector<double> xs(1000000);
  for (double& x : xs) x = power_law_weight(rng, spec);
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  v.require(*lo >= 1e-6, "min " + format_real(*lo) + " < 1e-6");
  v.require(*hi <= 1.0, "max " + format_real(*hi) + " > 1");
  const double slope = testing::log_log_slope(xs, 1e-5, 1e-1, 40);
  v.require(std::abs(slope + 3.0) <= kSlopeTolerance, "slope " + fmt(slope) + " not -3 +- 0.1");
  v.require(power_law_quantile(spec, 0.0) == 1e-6, "u=0 endpoint not exactly 1e-6");
  v.require(power_law_quantile(spec, 1.0) == 1.0, "u=1 endpoint not exactly 1");
  v.notes.push_back("min " + format_real(*lo) + ", max " + format_real(*hi) + ", slope " +
                    fmt(slope));
  return v;
}

Verdict louvain_oracle() {
  Verdict v;
  std::ifstream in(std::string(RECSIM_TEST_DATA_DIR) + "/louvain_graphs.json");
  if (!in) {
    v.require(false, "cannot open louvain_graphs.json");
    return v;
  }
  const auto graphs = nlohmann::json::parse(in);
  double worst = 0.0;
  for (const auto& g : graphs) {
    const auto w = g.at("weights").get<std::vector<std::vector<double>>>();
    UndirectedWeightedGraph graph(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
      for (std::size_t j = i + 1; j < w.size(); ++j)
        if (w[i][j] != 0.0) graph.add_edge(i, j, w[i][j]);
    const double best = g.at("best_modularity").get<double>();
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      RngStream rng(seed);
      const Partition p = louvain(graph, rng);
      const double gap = best - modularity(graph, p);
      worst = std::max(worst, gap);
      v.require(gap <= kLouvainGap, g.at("name").get<std::string>() + " seed " +
                                        std::to_string(seed) + ": gap " + fmt(gap));
      if (g.at("name") == "two_cliques") {
        bool split = p.community_count == 2;
        for (std::size_t i = 1; i < 8; ++i)
          split = split && ((p.assignment[i] == p.assignment[0]) == (i < 4));
        v.require(split, "two_cliques seed " + std::to_string(seed) + ": planted split missed");
      }
    }
  }
  v.notes.push_back(std::to_string(graphs.size()) + " graphs x 10 seeds, worst gap " + fmt(worst, 6));
  return v;
}

Verdict equation_suite() {
  Verdict v;
  double worst = 0.0;
  for (const auto& ex : testing::kFixtureOracle) {
    const auto st = testing::four_agent_fixture(ex.strategy);
    const RoundUpdate up = compute_round_update(st);
    const std::string name(to_string(ex.strategy));
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t d = 0; d < 2; ++d) {
        const double err = std::abs(up.state_deltas[i][d] - ex.state_deltas[i][d]);
        worst = std::max(worst, err);
        v.require(err <= kEquationTolerance, name + " state delta " + std::to_string(i));
      }
    if (up.weight_deltas.size() != ex.weight_deltas.size()) {
      v.require(false, name + ": edge count differs");
      continue;
    }
    for (std::size_t e = 0; e < ex.weight_deltas.size(); ++e) {
      const auto& got = up.weight_deltas[e];
      const auto& want = ex.weight_deltas[e];
      v.require(got.user == want.user && got.partner == want.partner, name + ": edge order");
      const double err = std::abs(got.delta - want.delta);
      worst = std::max(worst, err);
      v.require(err <= kEquationTolerance, name + " edge " + std::to_string(want.user) + "->" +
                                               std::to_string(want.partner));
    }
  }
  v.notes.push_back("6 strategies, worst deviation " + format_real(worst));
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path out_dir = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_results");
  Board board;
  const auto t0 = std::chrono::steady_clock::now();

  const ExperimentConfig cfg = ExperimentConfig::desk_preset();
  const auto specs = expand_grid(cfg);
  std::cout << "desk sweep: " << specs.size() << " runs, n=" << cfg.base.n << ", "
            << cfg.base.total_opinions << " opinions, master seed " << cfg.master_seed << '\n';

  // Sweep A: sequential, every round inspected.
  InvariantMonitor monitor{cfg.base.opinions_per_round, cfg.base.recent_window, 0, {}};
  std::vector<RunResult> sweep_a;
  sweep_a.reserve(specs.size());
  for (const RunSpec& spec : specs)
    sweep_a.push_back(execute(spec, [&](const SimulationState& st, const MetricsRecord& m) {
      monitor(st, m);
    }));
  // Sweep B: same seed, parallel pool.
  const auto sweep_b = execute_all(specs, 4);
  persist(sweep_a, out_dir);
  persist(sweep_b, out_dir / "repeat");
  const SweepTable table = SweepTable::from_results(sweep_a);
  const double sweep_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "two sweeps in " << fmt(sweep_seconds, 1) << " s; results in " << out_dir.string()
            << "\n\n";

  std::size_t failed_runs = 0;
  for (const RunResult& r : sweep_a) failed_runs += r.ok ? 0 : 1;

  const Cell hi_h_uniform{WeightInit::uniform, 0.3, 0.01};
  const Cell hi_h_power{WeightInit::power_law, 0.3, 0.01};
  const Cell lo_h_power{WeightInit::power_law, 0.01, 0.3};
  const Cell lo_h_uniform{WeightInit::uniform, 0.01, 0.3};

  for (auto [name, metric] : {std::pair{"fragmentation trend (max modularity)", Metric::max_modularity},
                              std::pair{"community-dispersion trend (max community std)",
                                        Metric::max_community_std}}) {
    Verdict trend;
    for (const Cell& c : {hi_h_uniform, hi_h_power, lo_h_power})
      check_direction(trend, table, metric, c, false);
    for (const Cell& c : {hi_h_uniform, hi_h_power}) check_significance(trend, table, metric, c);
    board.report(name, trend);

    Verdict exception;
    check_exception(exception, table, metric, lo_h_uniform);
    board.report("exception cell, " + std::string(to_string(metric)), exception);
  }

  Verdict ecc;
  for (const Cell& c : {hi_h_uniform, hi_h_power, lo_h_power})
    check_direction(ecc, table, Metric::eccentricity, c, true);
  board.report("eccentricity trend (rounds >= 5)", ecc);

  board.report("power-law sampler", power_law_sampler());
  board.report("louvain oracle", louvain_oracle());
  board.report("equation unit suite", equation_suite());

  Verdict det;
  det.require(failed_runs == 0, std::to_string(failed_runs) + " runs failed");
  for (const char* file : {"rounds.csv", "eccentricity.csv"}) {
    const std::string a = slurp(out_dir / file), b = slurp(out_dir / "repeat" / file);
    det.require(!a.empty() && a == b, std::string(file) + " differs between sweeps");
  }
  det.notes.push_back("1 worker vs 4 workers, rounds.csv and eccentricity.csv compared bytewise");
  board.report("determinism", det);

  Verdict inv;
  inv.require(monitor.rounds_checked == specs.size() * cfg.base.rounds(),
              "checked " + std::to_string(monitor.rounds_checked) + " rounds");
  for (const auto& v : monitor.violations) inv.require(false, v);
  std::size_t eccentricities = 0;
  for (const RunResult& r : sweep_a)
    for (const auto& e : r.eccentricities) {
      ++eccentricities;
      if (!(e.eccentricity >= 0.0)) inv.require(false, "negative eccentricity");
    }
  inv.notes.push_back(std::to_string(monitor.rounds_checked) + " rounds, " +
                      std::to_string(eccentricities) + " eccentricities");
  board.report("invariant suite", inv);

  std::cout << "\nper-cell medians\n";
  for (Metric m : {Metric::max_modularity, Metric::max_community_std, Metric::eccentricity}) {
    std::cout << "  " << to_string(m) << '\n';
    for (const Cell& c : cfg.cells()) std::cout << "    " << medians_line(table, m, c) << '\n';
  }

  const double total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << '\n' << (board.failed() == 0 ? "all criteria passed" : std::to_string(board.failed()) + " criteria failed")
            << " (" << fmt(total, 1) << " s)\n";
  return std::min(board.failed(), 125);
}
