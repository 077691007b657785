#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "recsim/harness.hpp"
#include "recsim/report.hpp"
#include "recsim/serialization.hpp"

namespace recsim::cli {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> strategy_names() {
  std::vector<std::string> names;
  for (Strategy s : kAllStrategies) names.emplace_back(to_string(s));
  return names;
}

// Binds one kebab-case flag per SimParams field. Only flags that were given
// on the command line are overlaid onto a base (config file or defaults).
// Sweeps omit the fields the grid sets.
class ParamFlags {
 public:
  void attach(CLI::App& app, bool grid_fields = true) {
    using Apply = std::function<void(SimParams&, const ParamFlags&)>;
    auto bind = [&](CLI::Option* opt, Apply apply) { bindings_.push_back({opt, std::move(apply)}); };
    bind(app.add_option("--n", v_.n, "Number of agents")->check(CLI::Range(2, 100000)),
         [](SimParams& t, const ParamFlags& f) { t.n = f.v_.n; });
    bind(app.add_option("--k", v_.k, "Idea vector dimension")->check(CLI::PositiveNumber),
         [](SimParams& t, const ParamFlags& f) { t.k = f.v_.k; });
    bind(app.add_option("--c", v_.c, "Conformity strength")->check(CLI::NonNegativeNumber),
         [](SimParams& t, const ParamFlags& f) { t.c = f.v_.c; });
    if (grid_fields) {
      bind(app.add_option("--h", v_.h, "Homophily strength")->check(CLI::NonNegativeNumber),
           [](SimParams& t, const ParamFlags& f) { t.h = f.v_.h; });
      bind(app.add_option("--a", v_.a, "Attention-to-novelty strength")
               ->check(CLI::NonNegativeNumber),
           [](SimParams& t, const ParamFlags& f) { t.a = f.v_.a; });
    }
    bind(app.add_option("--theta-h", v_.theta_h, "Homophily threshold")
             ->check(CLI::NonNegativeNumber),
         [](SimParams& t, const ParamFlags& f) { t.theta_h = f.v_.theta_h; });
    bind(app.add_option("--theta-a", v_.theta_a, "Novelty threshold")
             ->check(CLI::NonNegativeNumber),
         [](SimParams& t, const ParamFlags& f) { t.theta_a = f.v_.theta_a; });
    bind(app.add_option("--opinion-noise", v_.opinion_noise,
                        "Half-width of the uniform noise added to generated opinions")
             ->check(CLI::NonNegativeNumber),
         [](SimParams& t, const ParamFlags& f) { t.opinion_noise = f.v_.opinion_noise; });
    bind(app.add_option("--state-noise", v_.state_noise,
                        "Half-width of the uniform noise in idea state updates")
             ->check(CLI::NonNegativeNumber),
         [](SimParams& t, const ParamFlags& f) { t.state_noise = f.v_.state_noise; });
    bind(app.add_option("--opinions-per-round", v_.opinions_per_round,
                        "Opinions generated between updates")
             ->check(CLI::PositiveNumber),
         [](SimParams& t, const ParamFlags& f) { t.opinions_per_round = f.v_.opinions_per_round; });
    bind(app.add_option("--total-opinions", v_.total_opinions, "Opinions per run"),
         [](SimParams& t, const ParamFlags& f) { t.total_opinions = f.v_.total_opinions; });
    bind(app.add_option("--recommendation-size", v_.recommendation_size,
                        "Opinions/users recommended per user and round")
             ->check(CLI::PositiveNumber),
         [](SimParams& t, const ParamFlags& f) {
           t.recommendation_size = f.v_.recommendation_size;
         });
    bind(app.add_option("--recent-window", v_.recent_window,
                        "Own opinions kept for the recent average")
             ->check(CLI::PositiveNumber),
         [](SimParams& t, const ParamFlags& f) { t.recent_window = f.v_.recent_window; });
    if (grid_fields)
      bind(app.add_option("--weight-init", weight_init_, "Initial weight distribution")
               ->check(CLI::IsMember({"uniform", "power_law"})),
           [](SimParams& t, const ParamFlags& f) {
             t.weight_init = *parse_weight_init(f.weight_init_);
           });
    bind(app.add_option("--power-law-alpha", v_.power_law.alpha, "Power-law exponent"),
         [](SimParams& t, const ParamFlags& f) { t.power_law.alpha = f.v_.power_law.alpha; });
    bind(app.add_option("--power-law-xmin", v_.power_law.x_min, "Power-law lower bound"),
         [](SimParams& t, const ParamFlags& f) { t.power_law.x_min = f.v_.power_law.x_min; });
    bind(app.add_option("--power-law-xmax", v_.power_law.x_max, "Power-law upper bound"),
         [](SimParams& t, const ParamFlags& f) { t.power_law.x_max = f.v_.power_law.x_max; });
    if (grid_fields)
      bind(app.add_option("--strategy", strategy_, "Recommendation strategy")
               ->check(CLI::IsMember(strategy_names())),
           [](SimParams& t, const ParamFlags& f) { t.strategy = *parse_strategy(f.strategy_); });
    bind(app.add_option("--normalize-distance", v_.normalize_distance,
                        "Divide Euclidean distances by sqrt(k)")
             ->default_str(SimParams{}.normalize_distance ? "true" : "false"),
         [](SimParams& t, const ParamFlags& f) { t.normalize_distance = f.v_.normalize_distance; });
    if (grid_fields)
      bind(app.add_option("--seed", v_.seed, "Run seed"),
           [](SimParams& t, const ParamFlags& f) { t.seed = f.v_.seed; });
  }

  void overlay(SimParams& target) const {
    for (const auto& b : bindings_)
      if (b.option->count() > 0) b.apply(target, *this);
  }

 private:
  struct Binding {
    CLI::Option* option;
    std::function<void(SimParams&, const ParamFlags&)> apply;
  };

  SimParams v_{};
  std::string weight_init_{to_string(SimParams{}.weight_init)};
  std::string strategy_{to_string(SimParams{}.strategy)};
  std::vector<Binding> bindings_;
};

fs::path resolve_output_dir(const std::string& flag, const std::string& configured) {
  if (!flag.empty()) return flag;
  if (!configured.empty()) return configured;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return "results";
}

std::string describe(const RunSpec& s) {
  std::ostringstream os;
  os << "run " << s.run_id << ' ' << to_string(s.params.strategy) << ' '
     << to_string(s.cell.weight_init) << " h=" << s.cell.h << " a=" << s.cell.a << " rep "
     << s.replication;
  return os.str();
}

void print_modularity_table(const SweepTable& table, std::ostream& out) {
  const nlohmann::json summary = build_summary(table);
  out << std::left << std::setw(28) << "cell";
  for (Strategy s : kAllStrategies) out << std::right << std::setw(10) << to_string(s);
  out << '\n';
  for (const auto& cell : summary["cells"]) {
    std::ostringstream label;
    label << cell["weight_init"].get<std::string>() << " h=" << cell["h"].get<double>()
          << " a=" << cell["a"].get<double>();
    out << std::left << std::setw(28) << label.str();
    for (Strategy s : kAllStrategies) {
      const std::string name(to_string(s));
      out << std::right << std::setw(10);
      if (cell["strategies"].contains(name)) {
        out << std::fixed << std::setprecision(4)
            << cell["strategies"][name]["max_modularity"]["median"].get<double>();
        out.unsetf(std::ios::floatfield);
      } else {
        out << "-";
      }
    }
    out << '\n';
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Opinion dynamics on an adaptive network under recommendation strategies",
               "recsim"};
  app.option_defaults()->always_capture_default();
  // -h would clash with the homophily flag --h.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  bool verbose = false;
  bool quiet = false;
  app.add_flag("-v,--verbose", verbose, "Print resolved configuration");
  app.add_flag("-q,--quiet", quiet, "Suppress progress output");

  // run
  CLI::App* run = app.add_subcommand("run", "Execute one simulation");
  ParamFlags run_params;
  run_params.attach(*run);
  std::string run_config;
  std::string run_out;
  bool run_ecc = false;
  run->add_option("--config", run_config, "Config file providing base parameters")
      ->check(CLI::ExistingFile);
  run->add_option("--out", run_out, "Output directory (default: $RECSIM_OUTPUT_DIR or results)");
  run->add_flag("--eccentricity", run_ecc, "Record per-opinion eccentricity");

  // sweep
  CLI::App* sweep = app.add_subcommand("sweep", "Execute a parameter sweep");
  ParamFlags sweep_params;
  sweep_params.attach(*sweep, false);
  std::string sweep_config;
  std::string preset;
  std::string sweep_out;
  std::size_t workers = 0;
  std::uint64_t master_seed = 0;
  std::size_t replications = 0;
  bool sweep_ecc = false;
  sweep->add_option("config", sweep_config, "Config file")->check(CLI::ExistingFile);
  sweep->add_option("--preset", preset, "Built-in config: paper, paper_eccentricity or desk")
      ->check(CLI::IsMember({"paper", "paper_eccentricity", "desk"}));
  auto* workers_opt =
      sweep->add_option("--workers", workers, "Parallel workers (0 = hardware threads)");
  auto* seed_opt = sweep->add_option("--master-seed", master_seed, "Master seed (overrides the config)")
                       ->default_str("");
  auto* reps_opt = sweep->add_option("--replications", replications,
                                     "Runs per grid point (overrides the config)")
                       ->check(CLI::PositiveNumber)
                       ->default_str("");
  auto* ecc_opt = sweep->add_option("--eccentricity", sweep_ecc,
                                    "Record eccentricities (overrides the config)")
                      ->default_str("");
  sweep->add_option("--out", sweep_out, "Output directory (default: $RECSIM_OUTPUT_DIR or results)");

  // summarize
  CLI::App* summarize = app.add_subcommand("summarize", "Recompute summary.json from result CSVs");
  std::string results_dir;
  std::string summary_out;
  summarize->add_option("dir", results_dir, "Directory holding rounds.csv")->required();
  summarize->add_option("--out", summary_out, "Where to write summary.json (default: dir)");

  // validate-config
  CLI::App* validate = app.add_subcommand("validate-config", "Check a config file");
  std::string validate_path;
  validate->add_option("config", validate_path, "Config file")->required();

  std::vector<const char*> argv{"recsim"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (run->parsed()) {
      SimParams params;
      std::string configured_out;
      if (!run_config.empty()) {
        const ExperimentConfig cfg = load_experiment_config(run_config);
        params = cfg.base;
        configured_out = cfg.output_dir;
      }
      run_params.overlay(params);
      params.validate();
      if (verbose) err << to_json(params).dump(2) << '\n';

      RunSpec spec;
      spec.params = params;
      spec.cell = {params.weight_init, params.h, params.a};
      spec.eccentricity = run_ecc;
      const RunResult result = execute(spec);
      if (!result.ok) {
        err << "run failed: " << result.error << '\n';
        return kRuntimeFailure;
      }
      const fs::path dir = resolve_output_dir(run_out, configured_out);
      fs::create_directories(dir);
      const SweepTable table = SweepTable::from_results({result});
      write_rounds_csv(table, dir / "rounds.csv");
      if (run_ecc) write_eccentricity_csv(table, dir / "eccentricity.csv");
      out << "max_modularity " << format_real(result.max_modularity) << '\n'
          << "max_community_std " << format_real(result.max_community_std) << '\n';
      return kOk;
    }

    if (sweep->parsed()) {
      ExperimentConfig cfg;
      if (!sweep_config.empty()) {
        cfg = load_experiment_config(sweep_config);
      } else if (preset == "paper") {
        cfg = ExperimentConfig::paper_preset();
      } else if (preset == "paper_eccentricity") {
        cfg = ExperimentConfig::paper_eccentricity_preset();
      } else if (preset == "desk") {
        cfg = ExperimentConfig::desk_preset();
      } else {
        err << "sweep: a config file or --preset is required\n";
        return kUsageError;
      }
      sweep_params.overlay(cfg.base);
      if (workers_opt->count()) cfg.workers = workers;
      if (seed_opt->count()) cfg.master_seed = master_seed;
      if (reps_opt->count()) cfg.replications = replications;
      if (ecc_opt->count()) cfg.eccentricity = sweep_ecc;
      cfg.validate();
      if (verbose) err << to_json(cfg).dump(2) << '\n';

      const fs::path dir = resolve_output_dir(sweep_out, cfg.output_dir);
      const auto specs = expand_grid(cfg);
      const auto results = execute_all(
          specs, cfg.workers, [&](const RunResult& r, std::size_t done, std::size_t total) {
            if (quiet) return;
            err << '[' << done << '/' << total << "] " << describe(r.spec) << ' '
                << (r.ok ? "ok" : "FAILED: " + r.error) << '\n';
          });
      persist(results, dir);
      std::size_t failed = 0;
      for (const RunResult& r : results) failed += r.ok ? 0 : 1;
      out << "runs " << results.size() << "\nfailed " << failed << "\noutput " << dir.string()
          << '\n';
      if (failed > 0) {
        err << failed << " run(s) failed; see " << (dir / "failures.json").string() << '\n';
        return kRuntimeFailure;
      }
      return kOk;
    }

    if (summarize->parsed()) {
      SweepTable table;
      try {
        table = read_results_dir(results_dir);
      } catch (const ResultFormatError& e) {
        err << "summarize: " << e.what() << '\n';
        return kRuntimeFailure;
      }
      const fs::path dir = summary_out.empty() ? fs::path(results_dir) : fs::path(summary_out);
      fs::create_directories(dir);
      write_summary(table, dir);
      print_modularity_table(table, out);
      return kOk;
    }

    if (validate->parsed()) {
      const ExperimentConfig cfg = load_experiment_config(validate_path);
      out << to_json(cfg).dump(2) << '\n' << "runs " << expand_grid(cfg).size() << '\n';
      return kOk;
    }
  } catch (const std::invalid_argument& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kUsageError;
}

}  // namespace recsim::cli
