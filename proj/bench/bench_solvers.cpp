#include <benchmark/benchmark.h>

#include "q2o/solvers.hpp"
#include "testutil.hpp"

namespace {

using namespace q2o;

SolverConfig bench_config() {
  SolverConfig config;
  config.seed = 11;
  config.restarts = 8;
  config.sweeps = 200;
  return config;
}

void BM_PermutationSA(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  JoinGraph g = testutil::random_graph(400 + n, n, testutil::Topology::kRandom);
  PermutationModel model = build_nl_model(g, Objective::kCout);
  SolverConfig config = bench_config();
  for (auto _ : state) {
    Solution s = solve_permutation_sa(model, config);
    benchmark::DoNotOptimize(s.objective);
  }
}
BENCHMARK(BM_PermutationSA)->Arg(6)->Arg(10)->Arg(14);

void BM_PermutationSASerial(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  JoinGraph g = testutil::random_graph(400 + n, n, testutil::Topology::kRandom);
  PermutationModel model = build_nl_model(g, Objective::kCout);
  SolverConfig config = bench_config();
  for (auto _ : state) {
    Solution s = solve_permutation_sa_serial(model, config);
    benchmark::DoNotOptimize(s.objective);
  }
}
BENCHMARK(BM_PermutationSASerial)->Arg(6)->Arg(10)->Arg(14);

void BM_QuboSA(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  JoinGraph g = testutil::random_graph(500 + n, n, testutil::Topology::kRandom);
  Qubo q = build_qubo(g);
  SolverConfig config = bench_config();
  for (auto _ : state) {
    QuboSample sample = solve_qubo_sa(q, config);
    benchmark::DoNotOptimize(sample.energy);
  }
}
BENCHMARK(BM_QuboSA)->Arg(4)->Arg(6)->Arg(8);

void BM_QuboSASerial(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  JoinGraph g = testutil::random_graph(500 + n, n, testutil::Topology::kRandom);
  Qubo q = build_qubo(g);
  SolverConfig config = bench_config();
  for (auto _ : state) {
    QuboSample sample = solve_qubo_sa_serial(q, config);
    benchmark::DoNotOptimize(sample.energy);
  }
}
BENCHMARK(BM_QuboSASerial)->Arg(4)->Arg(6)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
