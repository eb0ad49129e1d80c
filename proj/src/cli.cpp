#include "q2o/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "q2o/encoders.hpp"
#include "q2o/error.hpp"
#include "q2o/hints.hpp"
#include "q2o/joingraph.hpp"
#include "q2o/pgclient.hpp"
#include "q2o/report.hpp"
#include "q2o/solvers.hpp"

namespace q2o {
namespace {

namespace fs = std::filesystem;

std::string shortest(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MalformedInput, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string join_aliases(const std::vector<std::string>& order) {
  std::string out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i) out.push_back(',');
    out += order[i];
  }
  return out;
}

void check_solver_options(const SolverOptions& options) {
  if (options.encoder != "nl" && options.encoder != "qubo") {
    throw Error(ErrorKind::ConfigError, "encoder must be nl or qubo, got '" + options.encoder + "'");
  }
  if (options.solver != "sa" && options.solver != "dp" && options.solver != "exhaustive" &&
      options.solver != "remote") {
    throw Error(ErrorKind::ConfigError,
                "solver must be sa, dp, exhaustive or remote, got '" + options.solver + "'");
  }
  if (options.restarts && *options.restarts < 1) {
    throw Error(ErrorKind::ConfigError, "restarts must be >= 1");
  }
  if (options.sweeps && *options.sweeps < 1) {
    throw Error(ErrorKind::ConfigError, "sweeps must be >= 1");
  }
  if (options.time_budget_ms && !(*options.time_budget_ms > 0.0)) {
    throw Error(ErrorKind::ConfigError, "time budget must be positive");
  }
  if (options.solver == "remote" && options.encoder != "nl") {
    throw Error(ErrorKind::ConfigError, "the remote endpoint accepts only the nl encoder");
  }
}

SolverConfig make_config(const JoinGraph& graph, const SolverOptions& options) {
  SolverConfig config = default_solver_config(graph.relation_count());
  config.seed = options.seed;
  if (options.restarts) config.restarts = *options.restarts;
  if (options.sweeps) config.sweeps = *options.sweeps;
  if (options.time_budget_ms) config.time_budget_ms = options.time_budget_ms;
  return config;
}

std::unique_ptr<RemoteSolver> make_remote_endpoint(const SolverConfig& config) {
  const char* replay = std::getenv("Q2O_REPLAY");
  if (replay && *replay) {
    const char* sleep_flag = std::getenv("Q2O_STUB_SLEEP");
    bool simulate = sleep_flag && std::string(sleep_flag) == "1";
    return std::make_unique<StubRemoteSolver>(StubRemoteSolver::from_file(replay, simulate));
  }
  return std::make_unique<LocalRemoteSolver>(config);
}

struct SolveOutcome {
  std::vector<std::string> order;
  double objective = 0.0;
  double solver_wall_ms = 0.0;
  bool valid = true;
  std::string solver_id;
};

SolveOutcome run_solver(const JoinGraph& graph, const SolverOptions& options, std::ostream& err) {
  SolverConfig config = make_config(graph, options);
  SolveOutcome outcome;

  if (options.solver == "dp") {
    auto [order, cost] = dp_leftdeep(graph, options.strict_no_cross_products);
    outcome.order = std::move(order);
    outcome.objective = cost;
    outcome.solver_id = "dp";
    return outcome;
  }
  if (options.solver == "exhaustive") {
    auto [order, cost] = exhaustive(graph, options.strict_no_cross_products);
    outcome.order = std::move(order);
    outcome.objective = cost;
    outcome.solver_id = "exhaustive";
    return outcome;
  }
  if (options.solver == "remote") {
    PermutationModel model =
        build_nl_model(graph, Objective::kCout, options.strict_no_cross_products);
    auto endpoint = make_remote_endpoint(config);
    Solution solution =
        remote_solve(model, options.time_budget_ms.value_or(0.0), *endpoint);
    outcome.order = std::move(solution.order);
    outcome.objective = solution.objective;
    outcome.solver_wall_ms = solution.wall_time_ms;
    outcome.valid = solution.valid;
    outcome.solver_id = solution.solver_id;
    return outcome;
  }

  if (options.encoder == "qubo") {
    if (options.strict_no_cross_products) {
      err << "warning: the one-hot encoding has no cross-product constraint; flag ignored\n";
    }
    Qubo qubo = build_qubo(graph);
    QuboSample sample = solve_qubo_sa(qubo, config);
    DecodeResult decoded = decode(qubo, sample.assignment);
    if (!decoded.ok()) {
      err << "warning: best sample violates one-hot constraints; repaired\n";
    }
    outcome.order = repair(qubo, sample.assignment);
    outcome.objective = sample.energy;
    outcome.solver_wall_ms = sample.wall_time_ms;
    outcome.valid = decoded.ok();
    outcome.solver_id = "sa:qubo";
    return outcome;
  }

  PermutationModel model = build_nl_model(graph, Objective::kCout, options.strict_no_cross_products);
  Solution solution = solve_permutation_sa(model, config);
  outcome.order = std::move(solution.order);
  outcome.objective = solution.objective;
  outcome.solver_wall_ms = solution.wall_time_ms;
  outcome.valid = solution.valid;
  outcome.solver_id = solution.solver_id;
  return outcome;
}

struct FixtureEntry {
  LatencyBreakdown breakdown;
  bool has_solver_ms = false;
};

std::map<std::string, FixtureEntry> load_fixtures(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedInput, std::string("fixtures: ") + e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorKind::MalformedInput, "fixtures: expected an object keyed by query id");
  }
  std::map<std::string, FixtureEntry> fixtures;
  for (const auto& [name, body] : doc.items()) {
    if (!body.is_object()) {
      throw Error(ErrorKind::MalformedInput, "fixtures: entry '" + name + "' is not an object");
    }
    auto field = [&](const char* key) {
      auto it = body.find(key);
      if (it == body.end() || !it->is_number()) {
        throw Error(ErrorKind::MalformedInput,
                    "fixtures: entry '" + name + "' lacks numeric " + key);
      }
      return it->get<double>();
    };
    FixtureEntry entry;
    entry.breakdown.query = name;
    entry.breakdown.pg_planning_ms = field("pg_planning_ms");
    entry.breakdown.pg_exec_ms = field("pg_exec_ms");
    entry.breakdown.hint_planning_ms = field("hint_planning_ms");
    entry.breakdown.hint_exec_ms = field("hint_exec_ms");
    if (body.contains("solver_ms")) {
      entry.breakdown.solver_ms = field("solver_ms");
      entry.has_solver_ms = true;
    }
    entry.breakdown.hint_honored =
        !body.contains("hint_honored") || (body["hint_honored"].is_boolean() && body["hint_honored"].get<bool>());
    fixtures.emplace(name, std::move(entry));
  }
  return fixtures;
}

}  // namespace

int cmd_optimize(const OptimizeOptions& options, std::ostream& out, std::ostream& err) {
  if (options.emit != "plan" && options.emit != "hint" && options.emit != "qubo") {
    err << "emit must be plan, hint or qubo, got '" << options.emit << "'\n";
    return 2;
  }
  try {
    check_solver_options(options.solve);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 2;
  }

  std::optional<JoinGraph> graph;
  try {
    graph = JoinGraph::parse(read_file(options.graph_path));
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 2;
  }
  for (const std::string& warning : validate(*graph)) {
    err << "warning: " << warning << "\n";
  }

  try {
    if (options.emit == "qubo") {
      dump_qubo(build_qubo(*graph), out);
      return 0;
    }

    SolveOutcome outcome = run_solver(*graph, options.solve, err);
    err << "solver " << outcome.solver_id << " wall ms: " << shortest(outcome.solver_wall_ms)
        << "\n";

    PlanHint hint = emit_leading_hint(order_to_tree(outcome.order));
    if (options.emit == "hint") {
      out << hint.text << "\n";
      return 0;
    }

    double cout_cost = plan_cost_cout(*graph, outcome.order);
    out << "order: " << join_aliases(outcome.order) << "\n";
    out << "objective: " << shortest(outcome.objective) << "\n";
    out << "cout: " << shortest(cout_cost) << "\n";
    if (graph->relation_count() <= 20) {
      auto [dp_order, dp_cost] = dp_leftdeep(*graph, options.solve.strict_no_cross_products);
      (void)dp_order;
      out << "dp_gap: " << shortest(cout_cost - dp_cost) << "\n";
    }
    out << "hint: " << hint.text << "\n";
    return 0;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 3;
  }
}

int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err) {
  try {
    check_solver_options(options.solve);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 2;
  }

  std::vector<fs::path> files;
  try {
    for (const auto& entry : fs::directory_iterator(options.workload_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        files.push_back(entry.path());
      }
    }
  } catch (const fs::filesystem_error& e) {
    err << "workload: " << e.what() << "\n";
    return 2;
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    err << "workload directory has no .json instances\n";
    return 4;
  }

  std::map<std::string, FixtureEntry> fixtures;
  const bool offline = !options.fixtures_path.empty();
  std::unique_ptr<PgConnection> conn;
  if (offline) {
    try {
      fixtures = load_fixtures(options.fixtures_path);
    } catch (const Error& e) {
      err << e.what() << "\n";
      return 2;
    }
  } else {
    std::optional<ConnectionSettings> settings;
    try {
      settings = ConnectionSettings::from_env();
    } catch (const Error& e) {
      err << e.what() << "\n";
      return 2;
    }
    if (!settings) {
      err << "no --fixtures and no Q2O_PG_* environment; nothing to measure\n";
      return 2;
    }
    try {
      conn = std::make_unique<PgConnection>(*settings);
    } catch (const Error& e) {
      err << e.what() << "\n";
      return 2;
    }
  }

  std::vector<BenchRecord> records;
  for (const fs::path& file : files) {
    BenchRecord rec;
    rec.breakdown.query = file.stem().string();
    try {
      JoinGraph graph = JoinGraph::parse(read_file(file.string()));
      std::string name = graph.name().empty() ? file.stem().string() : graph.name();
      rec.breakdown.query = name;
      for (const std::string& warning : validate(graph)) {
        err << name << ": warning: " << warning << "\n";
      }

      if (offline) {
        SolveOutcome outcome = run_solver(graph, options.solve, err);
        emit_leading_hint(order_to_tree(outcome.order));  // same pipeline as live mode
        auto it = fixtures.find(name);
        if (it == fixtures.end()) {
          throw Error(ErrorKind::ReplayMissing, "no fixture entry for '" + name + "'");
        }
        LatencyBreakdown measured = it->second.breakdown;
        if (!it->second.has_solver_ms) measured.solver_ms = outcome.solver_wall_ms;
        rec.breakdown = measured;
      } else {
        if (graph.sql().empty()) {
          throw Error(ErrorKind::EmptySql, "instance has no sql text");
        }
        JoinGraph live = refresh_cardinalities(*conn, graph);
        SolveOutcome outcome = run_solver(live, options.solve, err);
        PlanHint hint = emit_leading_hint(order_to_tree(outcome.order));
        rec.breakdown =
            conn->run_pair(name, live.sql(), hint, outcome.solver_wall_ms, options.warmup);
      }
      rec.gains = compute_gains(rec.breakdown);
    } catch (const Error& e) {
      rec.error = e.what();
      err << rec.breakdown.query << ": " << e.what() << "\n";
    }
    records.push_back(std::move(rec));
  }

  std::ofstream csv(options.output_csv, std::ios::binary);
  if (!csv) {
    err << "cannot write " << options.output_csv << "\n";
    return 2;
  }
  write_csv(records, csv);

  std::vector<GainRow> rows;
  for (const BenchRecord& rec : records) {
    if (rec.ok()) rows.push_back(rec.gains);
  }
  if (rows.empty()) {
    err << "no query succeeded\n";
    return 4;
  }
  out << format_aggregate(aggregate(rows)) << "\n";
  return 0;
}

int cmd_report(const ReportOptions& options, std::ostream& out, std::ostream& err) {
  std::ifstream in(options.input_csv, std::ios::binary);
  if (!in) {
    err << "cannot open " << options.input_csv << "\n";
    return 2;
  }
  std::vector<BenchRecord> records;
  try {
    records = parse_csv(in);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 2;
  }

  std::string svg_path = options.output_svg;
  if (svg_path.empty()) {
    svg_path = fs::path(options.input_csv).replace_extension(".svg").string();
  }
  std::ofstream svg(svg_path, std::ios::binary);
  if (!svg) {
    err << "cannot write " << svg_path << "\n";
    return 2;
  }
  render_report_svg(records, svg);
  err << "chart written to " << svg_path << "\n";

  std::vector<GainRow> rows;
  for (const BenchRecord& rec : records) {
    if (rec.ok()) rows.push_back(rec.gains);
  }
  if (rows.empty()) {
    out << "no successful rows\n";
    return 0;
  }
  out << format_aggregate(aggregate(rows)) << "\n";
  return 0;
}

}  // namespace q2o
