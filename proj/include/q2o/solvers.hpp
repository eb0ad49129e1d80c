#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "q2o/encoders.hpp"
#include "q2o/hints.hpp"

namespace q2o {

/// Knobs for the annealing searches. time_budget_ms is a soft cap checked
/// between sweeps; a restart in progress finishes its current sweep.
struct SolverConfig {
  std::uint64_t seed = 1;
  int restarts = 16;
  int sweeps = 1;              // full neighborhood passes per restart
  double t_initial = 0.0;      // <= 0 selects automatic calibration
  double cooling_alpha = 0.95;
  std::optional<double> time_budget_ms;
};

/// Defaults sized to the instance: 16 restarts, 200*n sweeps, t_initial auto.
SolverConfig default_solver_config(int n);

struct Solution {
  std::vector<std::string> order;
  double objective = 0.0;  // in the model's objective units
  double wall_time_ms = 0.0;
  std::string solver_id;
  int restarts_used = 0;
  bool valid = true;  // QUBO path: false when repair was needed
};

/// Metropolis search over permutations: moves drawn uniformly from
/// {adjacent swap, random pair swap, single-element insertion}, geometric
/// cooling per sweep, global best across restarts. Restart k seeds its own
/// RNG with seed + k, so results are deterministic and independent of how
/// many worker threads execute restarts. Restarts run under OpenMP.
Solution solve_permutation_sa(const PermutationModel& model, const SolverConfig& config);

/// Single-threaded reference path; must produce bit-identical results.
Solution solve_permutation_sa_serial(const PermutationModel& model, const SolverConfig& config);

struct QuboSample {
  BinaryAssignment assignment;
  double energy = 0.0;
  double wall_time_ms = 0.0;
  int restarts_used = 0;
};

/// Single-bit-flip Metropolis over the QUBO with incremental energy deltas
/// (O(degree) per flip); cooling/restart contract as above.
QuboSample solve_qubo_sa(const Qubo& qubo, const SolverConfig& config);
QuboSample solve_qubo_sa_serial(const Qubo& qubo, const SolverConfig& config);

/// decode(x) when valid; otherwise greedy repair: positions left to right,
/// prefer relations whose bit is set, tie-break on the lowest alias.
/// Always yields a valid permutation.
std::vector<std::string> repair(const Qubo& qubo, const BinaryAssignment& x);

/// Optimal left-deep order by subset dynamic programming (n <= 20). Ties
/// break toward the lexicographically smallest alias sequence. The returned
/// cost is the canonical C_out re-evaluation of the returned order.
std::pair<std::vector<std::string>, double> dp_leftdeep(const JoinGraph& graph,
                                                        bool forbid_cross_products = false);

/// Optimal bushy join tree by subset-split dynamic programming (2 <= n <= 16).
std::pair<JoinTree, double> dp_bushy(const JoinGraph& graph);

/// Minimum-C_out order over all n! permutations (n <= 8); same tie-break as
/// the DP oracle.
std::pair<std::vector<std::string>, double> exhaustive(const JoinGraph& graph,
                                                       bool forbid_cross_products = false);

/// Boundary for the cloud solver the pipeline would call in production.
class RemoteSolver {
 public:
  virtual ~RemoteSolver() = default;
  virtual Solution solve(const PermutationModel& model, double budget_ms) = 0;
  virtual std::string id() const = 0;
};

/// Wraps the local permutation annealer with the budget as its time cap.
class LocalRemoteSolver final : public RemoteSolver {
 public:
  explicit LocalRemoteSolver(SolverConfig base) : base_(std::move(base)) {}
  Solution solve(const PermutationModel& model, double budget_ms) override;
  std::string id() const override { return "remote:local"; }

 private:
  SolverConfig base_;
};

struct ReplayEntry {
  std::vector<std::string> order;
  double objective = 0.0;            // as recorded; informational
  double simulated_latency_ms = -1;  // < 0 means use the default
};

/// Replays canned solutions keyed by instance name, sleeping the simulated
/// round-trip latency. Stands in for the cloud service in offline runs.
class StubRemoteSolver final : public RemoteSolver {
 public:
  explicit StubRemoteSolver(std::map<std::string, ReplayEntry> entries,
                            double default_latency_ms = 2800.0, bool simulate_latency = true)
      : entries_(std::move(entries)),
        default_latency_ms_(default_latency_ms),
        simulate_latency_(simulate_latency) {}

  static StubRemoteSolver from_file(const std::string& path, bool simulate_latency = true);

  Solution solve(const PermutationModel& model, double budget_ms) override;
  std::string id() const override { return "remote:stub"; }

 private:
  std::map<std::string, ReplayEntry> entries_;
  double default_latency_ms_;
  bool simulate_latency_;
};

/// Delegates to the endpoint; Solution.wall_time_ms records the round-trip.
Solution remote_solve(const PermutationModel& model, double budget_ms, RemoteSolver& endpoint);

}  // namespace q2o
