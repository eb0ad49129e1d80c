#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace q2o {

/// Shared solver selection. Unset knobs fall back to instance-sized defaults.
struct SolverOptions {
  std::string encoder = "nl";  // nl | qubo
  std::string solver = "sa";   // sa | dp | exhaustive | remote
  std::uint64_t seed = 1;
  std::optional<int> restarts;
  std::optional<int> sweeps;
  std::optional<double> time_budget_ms;
  bool strict_no_cross_products = false;
};

struct OptimizeOptions {
  std::string graph_path;
  SolverOptions solve;
  std::string emit = "plan";  // plan | hint | qubo
};

struct BenchOptions {
  std::string workload_dir;
  std::string fixtures_path;  // offline mode when nonempty
  std::string output_csv = "bench.csv";
  SolverOptions solve;
  bool warmup = true;
};

struct ReportOptions {
  std::string input_csv;
  std::string output_svg;  // empty: input path with .svg extension
};

/// Stable result payload on out; warnings and timings on err.
/// Exit: 0 ok, 2 input error, 3 solver error.
int cmd_optimize(const OptimizeOptions& options, std::ostream& out, std::ostream& err);

/// Measures every instance in the workload (fixtures or live server), writes
/// the gain CSV, prints the aggregate line. Exit: 0 when any query succeeded,
/// 2 on input/setup errors, 4 when none succeeded.
int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err);

/// Bench CSV in, SVG chart out, aggregate line on out. Exit: 0 ok, 2 on bad input.
int cmd_report(const ReportOptions& options, std::ostream& out, std::ostream& err);

}  // namespace q2o
