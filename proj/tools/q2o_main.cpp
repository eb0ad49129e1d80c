#include <iostream>

#include <CLI11.hpp>

#include "q2o/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"join-order optimizer: anneal over database statistics, emit Leading hints"};
  app.require_subcommand(1);

  q2o::OptimizeOptions opt;
  CLI::App* optimize = app.add_subcommand("optimize", "solve one instance and print its plan");
  optimize->add_option("--graph", opt.graph_path, "instance JSON file")->required();
  optimize->add_option("--encoder", opt.solve.encoder, "nl|qubo (default nl)");
  optimize->add_option("--solver", opt.solve.solver, "sa|dp|exhaustive|remote (default sa)");
  optimize->add_option("--seed", opt.solve.seed, "RNG seed (default 1)");
  optimize->add_option("--restarts", opt.solve.restarts, "annealing restarts (default 16)");
  optimize->add_option("--sweeps", opt.solve.sweeps, "sweeps per restart (default 200*n)");
  optimize->add_option("--time-budget-ms", opt.solve.time_budget_ms, "soft wall-clock cap");
  optimize->add_option("--emit", opt.emit, "plan|hint|qubo (default plan)");
  optimize->add_flag("--strict-no-cross-products", opt.solve.strict_no_cross_products,
                     "reject orders that form cross products");

  q2o::BenchOptions bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "measure a workload and write the gain CSV");
  bench_cmd->add_option("--workload", bench.workload_dir, "directory of instance JSON files")
      ->required();
  bench_cmd->add_option("--fixtures", bench.fixtures_path,
                        "offline latency fixtures (JSON); skips the live server");
  bench_cmd->add_option("--output", bench.output_csv, "CSV path (default bench.csv)");
  bench_cmd->add_option("--encoder", bench.solve.encoder, "nl|qubo (default nl)");
  bench_cmd->add_option("--solver", bench.solve.solver, "sa|dp|exhaustive|remote (default sa)");
  bench_cmd->add_option("--seed", bench.solve.seed, "RNG seed (default 1)");
  bench_cmd->add_option("--restarts", bench.solve.restarts, "annealing restarts (default 16)");
  bench_cmd->add_option("--sweeps", bench.solve.sweeps, "sweeps per restart (default 200*n)");
  bench_cmd->add_option("--time-budget-ms", bench.solve.time_budget_ms, "soft wall-clock cap");
  bench_cmd->add_flag("--strict-no-cross-products", bench.solve.strict_no_cross_products,
                      "reject orders that form cross products");
  bench_cmd->add_flag("--warmup,!--no-warmup", bench.warmup,
                      "discarded warm-up execution before timing (default on)");

  q2o::ReportOptions report;
  CLI::App* report_cmd = app.add_subcommand("report", "render a bench CSV as an SVG chart");
  report_cmd->add_option("--input", report.input_csv, "bench CSV")->required();
  report_cmd->add_option("--output", report.output_svg, "SVG path (default: input with .svg)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (optimize->parsed()) return q2o::cmd_optimize(opt, std::cout, std::cerr);
  if (bench_cmd->parsed()) return q2o::cmd_bench(bench, std::cout, std::cerr);
  return q2o::cmd_report(report, std::cout, std::cerr);
}
