#include "fairstream/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"
#include "fairstream/csv.hpp"
#include "fairstream/metric.hpp"
#include "fairstream/oracle.hpp"
#include "fairstream/planted.hpp"
#include "fairstream/radius_ladder.hpp"

namespace fairstream::cli {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

class NoSolution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

DistanceMetric make_metric(const std::string& name) {
  if (name == "euclidean") return DistanceMetric::euclidean();
  if (name == "manhattan") {
    return DistanceMetric::custom([](std::span<const double> a, std::span<const double> b) {
      double s = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
      return s;
    });
  }
  if (name == "chebyshev") {
    return DistanceMetric::custom([](std::span<const double> a, std::span<const double> b) {
      double s = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
      return s;
    });
  }
  throw InputError("unknown metric '" + name + "' (euclidean, manhattan, chebyshev)");
}

FairnessSpec make_spec(const RunConfig& cfg) {
  if (cfg.caps.empty()) throw InputError("--caps is required");
  FairnessSpec spec(cfg.caps);
  if (cfg.k && *cfg.k != spec.k()) {
    throw InputError("--k " + std::to_string(*cfg.k) + " does not equal the sum of --caps (" +
                     std::to_string(spec.k()) + ")");
  }
  return spec;
}

// Owns either std::cin or an opened file.
class InputStream {
 public:
  explicit InputStream(const std::string& path) : path_(path) {
    if (path == "-") return;
    file_ = std::make_unique<std::ifstream>(path);
    if (!*file_) throw IoError("cannot open input '" + path + "'");
  }
  std::istream& get() { return file_ ? *file_ : std::cin; }
  bool replayable() const { return file_ != nullptr; }

 private:
  std::string path_;
  std::unique_ptr<std::ifstream> file_;
};

CsvOptions csv_options(const RunConfig& cfg, int groups, bool ordered) {
  CsvOptions o;
  o.group_column = cfg.group_col;
  o.groups = groups;
  o.require_group_order = ordered;
  return o;
}

std::vector<Point> read_all(const RunConfig& cfg, const std::string& path, int groups, json* labels = nullptr) {
  InputStream in(path);
  CsvPointReader reader(in.get(), csv_options(cfg, groups, false));
  std::vector<Point> points;
  while (auto p = reader.next()) points.push_back(std::move(*p));
  if (points.empty()) throw InputError("empty input: no records in '" + path + "'");
  if (labels) *labels = reader.labels().mapping();
  return points;
}

// Second pass over a file: max distance from any record to the centers.
double replay_cost(const RunConfig& cfg, int groups, const CenterSet& centers, const DistanceMetric& metric) {
  InputStream in(cfg.input);
  CsvPointReader reader(in.get(), csv_options(cfg, groups, false));
  double worst = 0.0;
  while (auto p = reader.next()) worst = std::max(worst, distance_to_set(*p, centers.centers(), metric));
  return worst;
}

json centers_json(const CenterSet& centers, const GroupLabels* labels) {
  json arr = json::array();
  for (const auto& c : centers.centers()) {
    json item{{"id", c.id}, {"coords", c.coords}, {"group", c.group}};
    if (labels) {
      if (auto l = labels->label_of(c.group)) item["label"] = *l;
    }
    arr.push_back(std::move(item));
  }
  return arr;
}

json base_report(const RunConfig& cfg, const std::string& mode) {
  json r;
  r["schema"] = kReportSchema;
  r["mode"] = mode;
  r["metric"] = cfg.metric;
  return r;
}

void attach_solution(json& r, const FairnessSpec& spec, const CenterSet& centers, const GroupLabels* labels) {
  r["status"] = "feasible";
  r["k"] = spec.k();
  r["caps"] = spec.caps();
  r["centers"] = centers_json(centers, labels);
  r["per_group_counts"] = centers.per_group_counts(spec.groups());
  if (labels) r["group_labels"] = labels->mapping();
}

json run_ladder(const RunConfig& cfg, SolverMode mode) {
  const auto start = Clock::now();
  const FairnessSpec spec = make_spec(cfg);
  const DistanceMetric metric = make_metric(cfg.metric);
  Ladder ladder(spec, {cfg.epsilon, mode, !cfg.serial}, metric);

  InputStream in(cfg.input);
  CsvPointReader reader(in.get(), csv_options(cfg, spec.groups(), mode == SolverMode::semi));
  std::vector<Point> batch;
  constexpr std::size_t kBatch = 1024;
  while (auto p = reader.next()) {
    batch.push_back(std::move(*p));
    if (batch.size() == kBatch) {
      ladder.observe_batch(batch);
      batch.clear();
    }
  }
  ladder.observe_batch(batch);
  if (reader.records() == 0) throw InputError("empty input: no records");

  LadderResult result;
  try {
    result = ladder.finish();
  } catch (const NoFeasibleSolution& e) {
    throw NoSolution(e.what());
  }

  json r = base_report(cfg, mode == SolverMode::semi ? "semi" : "solve");
  attach_solution(r, spec, result.centers, &reader.labels());
  r["r_hat"] = result.best_guess;
  r["epsilon"] = cfg.epsilon;
  r["points"] = reader.records();
  if (in.replayable() && !cfg.no_replay) r["cost"] = replay_cost(cfg, spec.groups(), result.centers, metric);
  const auto& s = result.stats;
  r["stats"] = {
      {"peak_stored_points", s.peak_stored_total},
      {"peak_stored_per_instance", s.peak_stored_per_instance},
      {"stored_points", s.stored_points},
      {"distance_evaluations", s.distance_evaluations},
      {"update_budget_violations", s.update_budget_violations},
      {"instances", {{"total", s.instances}, {"live", s.instances - s.overflowed}, {"pruned", s.overflowed}}},
      {"spawned", s.spawned},
      {"low", s.low},
      {"high", s.high},
      {"discarded", result.discarded},
      {"monotonicity_warnings", result.monotonicity_warnings},
  };
  r["wall_time_ms"] = elapsed_ms(start);
  return r;
}

json run_known_cmd(const RunConfig& cfg) {
  const auto start = Clock::now();
  if (!cfg.radius) throw InputError("known mode needs --radius");
  const FairnessSpec spec = make_spec(cfg);
  const DistanceMetric metric = make_metric(cfg.metric);
  const SolverMode mode = cfg.semi ? SolverMode::semi : SolverMode::general;
  RadiusGuess guess(*cfg.radius, spec, mode, metric);

  InputStream in(cfg.input);
  CsvPointReader reader(in.get(), csv_options(cfg, spec.groups(), cfg.semi));
  while (auto p = reader.next()) guess.process(*p);
  if (reader.records() == 0) throw InputError("empty input: no records");

  const auto outcome = guess.finalize();
  if (!outcome.is_feasible()) {
    throw NoSolution("radius " + format_double(*cfg.radius) + " is infeasible: " + to_string(outcome.reason()));
  }
  json r = base_report(cfg, "known");
  attach_solution(r, spec, outcome.centers(), &reader.labels());
  r["r_hat"] = *cfg.radius;
  r["solver"] = cfg.semi ? "semi" : "general";
  r["points"] = reader.records();
  if (in.replayable() && !cfg.no_replay) r["cost"] = replay_cost(cfg, spec.groups(), outcome.centers(), metric);
  r["stats"] = {
      {"peak_stored_points", guess.peak_stored_points()},
      {"peak_stored_per_instance", guess.peak_stored_points()},
      {"stored_points", guess.stored_points()},
      {"distance_evaluations", guess.distance_evaluations()},
      {"update_budget_violations", guess.update_budget_violations()},
      {"instances", {{"total", 1}, {"live", 1}, {"pruned", 0}}},
  };
  r["wall_time_ms"] = elapsed_ms(start);
  return r;
}

json run_oracle_cmd(const RunConfig& cfg) {
  const auto start = Clock::now();
  const FairnessSpec spec = make_spec(cfg);
  const DistanceMetric metric = make_metric(cfg.metric);
  json labels;
  const auto points = read_all(cfg, cfg.input, spec.groups(), &labels);
  const auto result = cfg.serial ? serial::brute_force_opt(points, spec, metric) : brute_force_opt(points, spec, metric);
  json r = base_report(cfg, "oracle");
  attach_solution(r, spec, result.optimal_centers, nullptr);
  r["group_labels"] = labels;
  r["r_opt"] = result.r_opt;
  r["cost"] = result.r_opt;
  r["points"] = points.size();
  r["evaluated"] = result.evaluated;
  r["wall_time_ms"] = elapsed_ms(start);
  return r;
}

RunResult run_gen_cmd(const RunConfig& cfg) {
  const FairnessSpec spec = make_spec(cfg);
  PlantedOptions opts;
  opts.n = cfg.n;
  opts.radius = cfg.radius.value_or(1.0);
  opts.separation = cfg.separation;
  opts.dim = cfg.dim;
  opts.seed = cfg.seed;
  const auto data = generate_planted(spec, opts);

  RunResult out;
  std::ostringstream csv;
  write_csv(csv, data.points);
  if (cfg.out.empty()) {
    out.csv = csv.str();
  } else {
    std::ofstream f(cfg.out);
    if (!f) throw IoError("cannot open output '" + cfg.out + "'");
    f << csv.str();
  }
  json r = base_report(cfg, "gen");
  r["status"] = "ok";
  r["n"] = data.points.size();
  r["k"] = spec.k();
  r["caps"] = spec.caps();
  r["dim"] = opts.dim;
  r["separation"] = opts.separation;
  r["seed"] = data.seed;
  r["planted_r"] = data.planted_r;
  r["planted_centers"] = data.planted_centers.ids();
  out.report = std::move(r);
  return out;
}

struct BenchDataset {
  std::string name;
  std::vector<Point> points;
  std::optional<double> r_ref;
  std::string r_ref_source;
};

json bench_row(const BenchDataset& ds, const FairnessSpec& spec, const std::string& algorithm,
               const std::optional<CenterSet>& centers, std::optional<double> r_hat, double ms,
               const DistanceMetric& metric, const std::string& failure = {}) {
  json row{{"dataset", ds.name}, {"n", ds.points.size()}, {"k", spec.k()},
           {"algorithm", algorithm}, {"runtime_ms", ms}};
  if (!centers) {
    row["status"] = failure;
    return row;
  }
  const double cost = clustering_cost(ds.points, *centers, metric);
  row["status"] = "feasible";
  row["cost"] = cost;
  row["fair"] = check_fairness(*centers, spec).ok();
  row["centers"] = centers->size();
  if (r_hat) row["r_hat"] = *r_hat;
  if (ds.r_ref) {
    row["r_ref"] = *ds.r_ref;
    row["r_ref_source"] = ds.r_ref_source;
    if (*ds.r_ref > 0.0) row["ratio"] = cost / *ds.r_ref;
  }
  return row;
}

json run_bench_cmd(const RunConfig& cfg) {
  const FairnessSpec spec = make_spec(cfg);
  const DistanceMetric metric = make_metric(cfg.metric);
  const OracleLimits limits;

  std::vector<BenchDataset> datasets;
  std::vector<std::string> inputs = cfg.inputs;
  if (inputs.empty() && cfg.sizes.empty() && cfg.input != "-") inputs.push_back(cfg.input);
  for (const auto& path : inputs) {
    BenchDataset ds{path, read_all(cfg, path, spec.groups()), std::nullopt, {}};
    if (ds.points.size() <= limits.max_points && spec.k() <= limits.max_k) {
      ds.r_ref = brute_force_opt(ds.points, spec, metric, limits).r_opt;
      ds.r_ref_source = "oracle";
    }
    datasets.push_back(std::move(ds));
  }
  std::uint64_t seed = cfg.seed;
  for (int size : cfg.sizes) {
    for (int rep = 0; rep < cfg.repeats; ++rep) {
      PlantedOptions opts;
      opts.n = size;
      opts.radius = cfg.radius.value_or(1.0);
      opts.separation = cfg.separation;
      opts.dim = cfg.dim;
      opts.seed = seed++;
      auto data = generate_planted(spec, opts);
      datasets.push_back({"planted-n" + std::to_string(size) + "-seed" + std::to_string(opts.seed),
                          std::move(data.points), data.planted_r, "planted"});
    }
  }
  if (datasets.empty()) throw InputError("bench needs --input files or --sizes");

  json rows = json::array();
  for (const auto& ds : datasets) {
    for (SolverMode mode : {SolverMode::general, SolverMode::semi}) {
      const auto start = Clock::now();
      const auto stream = mode == SolverMode::semi ? group_sorted(ds.points) : ds.points;
      Ladder ladder(spec, {cfg.epsilon, mode, !cfg.serial}, metric);
      ladder.observe_batch(stream);
      const std::string name = mode == SolverMode::semi ? "semi" : "solve";
      try {
        auto result = ladder.finish();
        rows.push_back(bench_row(ds, spec, name, result.centers, result.best_guess, elapsed_ms(start), metric));
      } catch (const NoFeasibleSolution&) {
        rows.push_back(bench_row(ds, spec, name, std::nullopt, std::nullopt, elapsed_ms(start), metric, "infeasible"));
      }
    }
    {
      const auto start = Clock::now();
      auto c = cfg.serial ? serial::gonzalez(ds.points, spec.k(), metric) : gonzalez(ds.points, spec.k(), metric);
      rows.push_back(bench_row(ds, spec, "gonzalez", c, std::nullopt, elapsed_ms(start), metric));
    }
    if (ds.r_ref_source == "oracle") {
      const auto start = Clock::now();
      auto o = brute_force_opt(ds.points, spec, metric, limits);
      rows.push_back(bench_row(ds, spec, "oracle", o.optimal_centers, std::nullopt, elapsed_ms(start), metric));
    }
  }
  return rows;
}

json error_report(const std::string& kind, const std::string& message) {
  return json{{"schema", kReportSchema}, {"status", "error"}, {"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace

RunResult run(const RunConfig& config) {
  RunResult out;
  try {
    if (config.command == "solve") {
      out.report = run_ladder(config, SolverMode::general);
    } else if (config.command == "semi") {
      out.report = run_ladder(config, SolverMode::semi);
    } else if (config.command == "known") {
      out.report = run_known_cmd(config);
    } else if (config.command == "oracle") {
      out.report = run_oracle_cmd(config);
    } else if (config.command == "gen") {
      out = run_gen_cmd(config);
    } else if (config.command == "bench") {
      out.report = run_bench_cmd(config);
    } else {
      throw InputError("unknown command '" + config.command + "'");
    }
  } catch (const StreamOrderError& e) {
    out = {error_report("stream_order", e.what()), 1, {}};
  } catch (const InputError& e) {
    out = {error_report("input", e.what()), 1, {}};
  } catch (const IoError& e) {
    out = {error_report("io", e.what()), 1, {}};
  } catch (const NoSolution& e) {
    out = {error_report("infeasible", e.what()), 2, {}};
  } catch (const std::exception& e) {
    out = {error_report("internal", e.what()), 3, {}};
  }
  return out;
}

json strip_timing(json report) {
  if (report.is_array()) {
    for (auto& row : report) row = strip_timing(std::move(row));
  } else if (report.is_object()) {
    report.erase("wall_time_ms");
    report.erase("runtime_ms");
  }
  return report;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Streaming fair k-center clustering"};
  app.require_subcommand(1);
  RunConfig cfg;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "CSV input path, '-' for standard input");
    sub->add_option("--metric", cfg.metric, "euclidean | manhattan | chebyshev");
    sub->add_option("--group-col", cfg.group_col, "Group column name or 0-based index");
    sub->add_option("--k", cfg.k, "Total center budget (must equal the sum of --caps)");
    sub->add_option("--caps", cfg.caps, "Per-group caps, comma separated")->delimiter(',')->required();
    sub->add_option("--out", cfg.out, "Output path (default: standard output)");
    sub->add_flag("--serial", cfg.serial, "Use the single-threaded reference kernels");
  };

  auto* solve = app.add_subcommand("solve", "One-pass 5-approximation with radius guessing");
  auto* semi = app.add_subcommand("semi", "Group-ordered stream 3-approximation with radius guessing");
  auto* known = app.add_subcommand("known", "Single run at a known optimal radius");
  auto* oracle = app.add_subcommand("oracle", "Exact optimum by brute force (small inputs)");
  auto* gen = app.add_subcommand("gen", "Planted dataset with a known optimum");
  auto* bench = app.add_subcommand("bench", "Cost/ratio/runtime table across solvers");
  for (auto* sub : {solve, semi, known, oracle, gen, bench}) add_common(sub);
  for (auto* sub : {solve, semi, known}) sub->add_flag("--no-replay", cfg.no_replay, "Skip the cost replay pass");
  for (auto* sub : {solve, semi, bench}) sub->add_option("--epsilon", cfg.epsilon, "Radius grid ratio");
  known->add_option("--radius", cfg.radius, "Radius guess r̂")->required();
  known->add_flag("--semi", cfg.semi, "Use the group-ordered solver");
  for (auto* sub : {gen, bench}) {
    sub->add_option("--radius", cfg.radius, "Planted radius (default 1)");
    sub->add_option("--separation", cfg.separation, "Center spacing in radii (>= 4)");
    sub->add_option("--dim", cfg.dim, "Dimension");
    sub->add_option("--seed", cfg.seed, "RNG seed");
  }
  gen->add_option("--n", cfg.n, "Number of points")->required();
  bench->add_option("--inputs", cfg.inputs, "CSV datasets")->delimiter(',');
  bench->add_option("--sizes", cfg.sizes, "Planted dataset sizes, comma separated")->delimiter(',');
  bench->add_option("--repeats", cfg.repeats, "Planted datasets per size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();

  RunResult result = run(cfg);
  if (result.exit_code != 0) err << "error: " << result.report["error"]["message"].get<std::string>() << '\n';

  const std::string text = result.report.dump(2) + "\n";
  if (cfg.command == "gen" && result.exit_code == 0) {
    if (cfg.out.empty()) {
      out << result.csv;
    } else {
      out << text;
    }
    return 0;
  }
  if (cfg.out.empty()) {
    out << text;
  } else {
    std::ofstream f(cfg.out);
    if (!f) {
      err << "error: cannot open output '" << cfg.out << "'\n";
      return 1;
    }
    f << text;
  }
  return result.exit_code;
}

}  // namespace fairstream::cli
