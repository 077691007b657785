#include "recsim/report.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

namespace recsim {

namespace fs = std::filesystem;

double RunRows::max_modularity() const {
  double best = rounds.empty() ? 0.0 : rounds.front().modularity;
  for (const auto& r : rounds) best = std::max(best, r.modularity);
  return best;
}

double RunRows::max_community_std() const {
  double best = rounds.empty() ? 0.0 : rounds.front().community_std;
  for (const auto& r : rounds) best = std::max(best, r.community_std);
  return best;
}

SweepTable SweepTable::from_results(const std::vector<RunResult>& results) {
  SweepTable table;
  for (const RunResult& r : results) {
    table.has_eccentricity = table.has_eccentricity || r.spec.eccentricity;
    if (!r.ok) continue;
    table.runs.push_back({r.spec.run_id, r.spec.params.strategy, r.spec.cell, r.spec.params.seed,
                          r.rounds, r.eccentricities});
  }
  std::sort(table.runs.begin(), table.runs.end(),
            [](const RunRows& x, const RunRows& y) { return x.run_id < y.run_id; });
  return table;
}

std::string_view to_string(Metric m) noexcept {
  switch (m) {
    case Metric::max_modularity: return "max_modularity";
    case Metric::max_community_std: return "max_community_std";
    case Metric::eccentricity: return "eccentricity";
  }
  return "?";
}

std::vector<double> metric_sample(const SweepTable& table, Metric metric, const Cell& cell,
                                  Strategy strategy) {
  std::vector<double> out;
  for (const RunRows& run : table.runs) {
    if (run.strategy != strategy || run.cell != cell) continue;
    switch (metric) {
      case Metric::max_modularity: out.push_back(run.max_modularity()); break;
      case Metric::max_community_std: out.push_back(run.max_community_std()); break;
      case Metric::eccentricity:
        for (const auto& e : run.eccentricities)
          if (e.round >= kEccentricityMinRound) out.push_back(e.eccentricity);
        break;
    }
  }
  return out;
}

namespace {

std::size_t runs_in(const SweepTable& table, const Cell& cell, Strategy s) {
  return static_cast<std::size_t>(std::count_if(
      table.runs.begin(), table.runs.end(),
      [&](const RunRows& r) { return r.cell == cell && r.strategy == s; }));
}

bool is_opinion_strategy(Strategy s) { return s == Strategy::NO || s == Strategy::FO; }

}  // namespace

ComparisonReport compare_strategies(const SweepTable& table, Metric metric, const Cell& cell) {
  ComparisonReport rep;
  rep.cell = cell;
  rep.metric = metric;
  rep.alternative =
      metric == Metric::eccentricity ? stats::Alternative::greater : stats::Alternative::less;

  std::vector<Strategy> present;
  std::map<Strategy, std::vector<double>> samples;
  bool underpowered = false;
  for (Strategy s : kAllStrategies) {
    const std::size_t runs = runs_in(table, cell, s);
    if (runs == 0) continue;
    auto sample = metric_sample(table, metric, cell, s);
    if (sample.empty()) continue;
    present.push_back(s);
    if (runs < 3) underpowered = true;
    rep.spreads[s] = {sample.size(), stats::median(sample), stats::quantile(sample, 0.25),
                      stats::quantile(sample, 0.75)};
    samples[s] = std::move(sample);
  }
  if (present.size() < 2) {
    rep.status = ComparisonReport::Status::error;
    rep.message = "need at least two strategies with results, found " +
                  std::to_string(present.size());
    return rep;
  }
  if (underpowered) {
    rep.status = ComparisonReport::Status::underpowered;
    rep.message = "fewer than 3 runs for some strategy";
    return rep;
  }
  for (Strategy first : present) {
    if (!is_opinion_strategy(first)) continue;
    for (Strategy second : present) {
      if (is_opinion_strategy(second)) continue;
      rep.tests.push_back(
          {first, second, stats::mann_whitney_u(samples[first], samples[second], rep.alternative)});
    }
  }
  return rep;
}

namespace {

nlohmann::json spread_json(const Spread& s) {
  return {{"count", s.count}, {"median", s.median}, {"q1", s.q1}, {"q3", s.q3},
          {"iqr", s.q3 - s.q1}};
}

std::string_view status_name(ComparisonReport::Status s) {
  switch (s) {
    case ComparisonReport::Status::ok: return "ok";
    case ComparisonReport::Status::underpowered: return "underpowered";
    case ComparisonReport::Status::error: return "error";
  }
  return "?";
}

nlohmann::json comparison_json(const ComparisonReport& rep) {
  nlohmann::json tests = nlohmann::json::array();
  for (const PairTest& t : rep.tests) {
    tests.push_back({{"first", to_string(t.first)},
                     {"second", to_string(t.second)},
                     {"u", t.result.u},
                     {"p", t.result.p},
                     {"exact", t.result.exact}});
  }
  return {{"status", status_name(rep.status)},
          {"message", rep.message},
          {"alternative", rep.alternative == stats::Alternative::less ? "less" : "greater"},
          {"tests", std::move(tests)}};
}

}  // namespace

nlohmann::json build_summary(const SweepTable& table) {
  std::set<Cell> cells;
  for (const RunRows& r : table.runs) cells.insert(r.cell);

  std::vector<Metric> metrics{Metric::max_modularity, Metric::max_community_std};
  if (table.has_eccentricity) metrics.push_back(Metric::eccentricity);

  nlohmann::json cells_json = nlohmann::json::array();
  for (const Cell& cell : cells) {
    nlohmann::json strategies = nlohmann::json::object();
    for (Strategy s : kAllStrategies) {
      const std::size_t runs = runs_in(table, cell, s);
      if (runs == 0) continue;
      nlohmann::json entry{{"runs", runs}};
      for (Metric m : {Metric::max_modularity, Metric::max_community_std}) {
        const auto sample = metric_sample(table, m, cell, s);
        entry[std::string(to_string(m))] = spread_json(
            {sample.size(), stats::median(sample), stats::quantile(sample, 0.25),
             stats::quantile(sample, 0.75)});
      }
      if (table.has_eccentricity) {
        const auto ecc = metric_sample(table, Metric::eccentricity, cell, s);
        nlohmann::json q{{"count", ecc.size()}};
        if (!ecc.empty()) {
          q["q05"] = stats::quantile(ecc, 0.05);
          q["q25"] = stats::quantile(ecc, 0.25);
          q["median"] = stats::quantile(ecc, 0.5);
          q["q75"] = stats::quantile(ecc, 0.75);
          q["q95"] = stats::quantile(ecc, 0.95);
        }
        entry["eccentricity"] = std::move(q);
      }
      strategies[std::string(to_string(s))] = std::move(entry);
    }
    nlohmann::json comparisons = nlohmann::json::object();
    for (Metric m : metrics)
      comparisons[std::string(to_string(m))] = comparison_json(compare_strategies(table, m, cell));
    cells_json.push_back({{"weight_init", to_string(cell.weight_init)},
                          {"h", cell.h},
                          {"a", cell.a},
                          {"strategies", std::move(strategies)},
                          {"comparisons", std::move(comparisons)}});
  }
  return {{"run_count", table.runs.size()},
          {"eccentricity_min_round", kEccentricityMinRound},
          {"cells", std::move(cells_json)}};
}

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_for_write(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace

void write_rounds_csv(const SweepTable& table, const fs::path& path) {
  auto out = open_for_write(path);
  out << kRoundsHeader << '\n';
  for (const RunRows& run : table.runs) {
    for (const MetricsRecord& r : run.rounds) {
      out << run.run_id << ',' << to_string(run.strategy) << ',' << format_real(run.cell.h) << ','
          << format_real(run.cell.a) << ',' << to_string(run.cell.weight_init) << ',' << run.seed
          << ',' << r.round << ',' << format_real(r.modularity) << ',' << r.n_communities << ','
          << format_real(r.community_std) << '\n';
    }
  }
  finish(out, path);
}

void write_eccentricity_csv(const SweepTable& table, const fs::path& path) {
  auto out = open_for_write(path);
  out << kEccentricityHeader << '\n';
  for (const RunRows& run : table.runs) {
    for (const EccentricityRecord& e : run.eccentricities) {
      out << run.run_id << ',' << to_string(run.strategy) << ',' << format_real(run.cell.h) << ','
          << format_real(run.cell.a) << ',' << to_string(run.cell.weight_init) << ',' << e.round
          << ',' << e.opinion_id << ',' << e.author << ',' << format_real(e.eccentricity) << '\n';
    }
  }
  finish(out, path);
}

namespace {

class CsvReader {
 public:
  CsvReader(const fs::path& path, std::string_view header) : path_(path), in_(path) {
    if (!in_) throw ResultFormatError(path.string() + ": cannot open");
    std::string line;
    if (!next_line(line)) fail("empty file, expected header");
    if (line != header) fail("header mismatch, expected '" + std::string(header) + "'");
  }

  bool next(std::vector<std::string_view>& fields, std::size_t expected) {
    if (!next_line(buffer_)) return false;
    fields.clear();
    std::string_view rest = buffer_;
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != expected)
      fail("expected " + std::to_string(expected) + " fields, found " +
           std::to_string(fields.size()));
    return true;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ResultFormatError(path_.string() + ":" + std::to_string(line_) + ": " + what);
  }

  template <typename T>
  T number(std::string_view field, std::string_view column) const {
    T value{};
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
      fail("column " + std::string(column) + ": bad number '" + std::string(field) + "'");
    return value;
  }

  Strategy strategy(std::string_view field) const {
    auto s = parse_strategy(field);
    if (!s) fail("column strategy: unknown strategy '" + std::string(field) + "'");
    return *s;
  }

  WeightInit weight_init(std::string_view field) const {
    auto w = parse_weight_init(field);
    if (!w) fail("column weight_init: unknown initializer '" + std::string(field) + "'");
    return *w;
  }

 private:
  bool next_line(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  }

  fs::path path_;
  std::ifstream in_;
  std::string buffer_;
  std::size_t line_ = 0;
};

}  // namespace

SweepTable read_results_dir(const fs::path& dir) {
  const fs::path rounds_path = dir / "rounds.csv";
  if (!fs::exists(rounds_path)) throw ResultFormatError(rounds_path.string() + ": missing");

  std::map<std::size_t, RunRows> runs;
  {
    CsvReader csv(rounds_path, kRoundsHeader);
    std::vector<std::string_view> f;
    while (csv.next(f, 10)) {
      RunRows row;
      row.run_id = csv.number<std::size_t>(f[0], "run_id");
      row.strategy = csv.strategy(f[1]);
      row.cell.h = csv.number<double>(f[2], "h");
      row.cell.a = csv.number<double>(f[3], "a");
      row.cell.weight_init = csv.weight_init(f[4]);
      row.seed = csv.number<std::uint64_t>(f[5], "seed");
      MetricsRecord rec;
      rec.round = csv.number<std::size_t>(f[6], "round");
      rec.modularity = csv.number<double>(f[7], "modularity");
      rec.n_communities = csv.number<std::size_t>(f[8], "n_communities");
      rec.community_std = csv.number<double>(f[9], "community_std");

      auto [it, inserted] = runs.try_emplace(row.run_id, row);
      RunRows& run = it->second;
      if (run.strategy != row.strategy || run.cell != row.cell || run.seed != row.seed)
        csv.fail("run " + std::to_string(row.run_id) + " changes strategy, cell or seed");
      run.rounds.push_back(rec);
    }
  }

  SweepTable table;
  const fs::path ecc_path = dir / "eccentricity.csv";
  if (fs::exists(ecc_path)) {
    table.has_eccentricity = true;
    CsvReader csv(ecc_path, kEccentricityHeader);
    std::vector<std::string_view> f;
    while (csv.next(f, 9)) {
      const auto run_id = csv.number<std::size_t>(f[0], "run_id");
      auto it = runs.find(run_id);
      if (it == runs.end()) csv.fail("run " + std::to_string(run_id) + " not in rounds.csv");
      EccentricityRecord e;
      e.round = csv.number<std::size_t>(f[5], "round");
      e.opinion_id = csv.number<std::size_t>(f[6], "opinion_id");
      e.author = csv.number<std::size_t>(f[7], "author");
      e.eccentricity = csv.number<double>(f[8], "eccentricity");
      it->second.eccentricities.push_back(e);
    }
  }
  for (auto& [id, run] : runs) table.runs.push_back(std::move(run));
  return table;
}

void write_summary(const SweepTable& table, const fs::path& dir) {
  const fs::path path = dir / "summary.json";
  auto out = open_for_write(path);
  out << build_summary(table).dump(2) << '\n';
  finish(out, path);
}

void persist(const std::vector<RunResult>& results, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error(dir.string() + ": " + ec.message());

  const SweepTable table = SweepTable::from_results(results);
  write_rounds_csv(table, dir / "rounds.csv");
  if (table.has_eccentricity) write_eccentricity_csv(table, dir / "eccentricity.csv");
  write_summary(table, dir);

  nlohmann::json failures = nlohmann::json::array();
  for (const RunResult& r : results)
    if (!r.ok) failures.push_back({{"run_id", r.spec.run_id}, {"error", r.error}});
  const fs::path failures_path = dir / "failures.json";
  if (!failures.empty()) {
    auto out = open_for_write(failures_path);
    out << failures.dump(2) << '\n';
    finish(out, failures_path);
  } else {
    fs::remove(failures_path, ec);
  }
}

}  // namespace recsim
