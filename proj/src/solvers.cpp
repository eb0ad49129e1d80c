#include "q2o/solvers.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

#include <json.hpp>

#include "q2o/costmodel.hpp"

namespace q2o {
namespace {

using Clock = std::chrono::steady_clock;

constexpr double kInf = std::numeric_limits<double>::infinity();

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void check_config(const SolverConfig& config) {
  if (config.restarts < 1) throw Error(ErrorKind::ConfigError, "restarts must be >= 1");
  if (config.sweeps < 1) throw Error(ErrorKind::ConfigError, "sweeps must be >= 1");
  if (!(config.cooling_alpha > 0.0 && config.cooling_alpha < 1.0)) {
    throw Error(ErrorKind::ConfigError, "cooling_alpha must lie in (0, 1)");
  }
  if (config.time_budget_ms && !(*config.time_budget_ms > 0.0)) {
    throw Error(ErrorKind::ConfigError, "time_budget_ms must be positive");
  }
}

// Standard-library distributions produce different streams across platforms;
// draws here must replay exactly, so map raw engine output ourselves.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

double unit(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

void shuffle_order(std::vector<int>& order, std::mt19937_64& rng) {
  for (int i = static_cast<int>(order.size()) - 1; i > 0; --i) {
    std::swap(order[i], order[static_cast<int>(bounded(rng, static_cast<std::uint64_t>(i) + 1))]);
  }
}

struct Move {
  int kind = 0;  // 0 adjacent swap, 1 pair swap, 2 insertion
  int a = 0;
  int b = 0;
};

Move propose_move(std::mt19937_64& rng, int n) {
  Move m;
  m.kind = static_cast<int>(bounded(rng, 3));
  if (m.kind == 0) {
    m.a = static_cast<int>(bounded(rng, static_cast<std::uint64_t>(n) - 1));
    m.b = m.a + 1;
    return m;
  }
  m.a = static_cast<int>(bounded(rng, static_cast<std::uint64_t>(n)));
  m.b = static_cast<int>(bounded(rng, static_cast<std::uint64_t>(n) - 1));
  if (m.b >= m.a) ++m.b;
  return m;
}

void apply_move(std::vector<int>& order, const Move& m) {
  if (m.kind == 2) {
    int v = order[m.a];
    order.erase(order.begin() + m.a);
    order.insert(order.begin() + m.b, v);
  } else {
    std::swap(order[m.a], order[m.b]);
  }
}

void revert_move(std::vector<int>& order, const Move& m) {
  if (m.kind == 2) {
    int v = order[m.b];
    order.erase(order.begin() + m.b);
    order.insert(order.begin() + m.a, v);
  } else {
    std::swap(order[m.a], order[m.b]);
  }
}

/// Single-pass objective in O(n + edges) via running products. Slightly
/// different rounding than the canonical evaluation, so it only steers the
/// search; accepted results are re-scored with PermutationModel::evaluate.
class FastEvaluator {
 public:
  explicit FastEvaluator(const PermutationModel& model)
      : graph_(&model.graph()),
        objective_(model.objective()),
        forbid_(model.forbids_cross_products()),
        placed_(model.graph().relation_count(), 0) {}

  double operator()(const std::vector<int>& order) {
    const int n = static_cast<int>(order.size());
    std::fill(placed_.begin(), placed_.end(), 0);
    placed_[order[0]] = 1;
    double running = graph_->relation(order[0]).cardinality;
    double cost = 0.0;
    bool cross = false;
    for (int k = 1; k < n; ++k) {
      int r = order[k];
      running *= graph_->relation(r).cardinality;
      bool joined = false;
      for (const auto& [j, sel] : graph_->neighbors(r)) {
        if (placed_[j]) {
          running *= sel;
          joined = true;
        }
      }
      if (!joined) cross = true;
      placed_[r] = 1;
      cost += objective_ == Objective::kCout ? running : std::log2(running);
    }
    if (forbid_ && cross) cost += kCrossProductPenalty;
    return cost;
  }

 private:
  const JoinGraph* graph_;
  Objective objective_;
  bool forbid_;
  std::vector<char> placed_;
};

double calibrate_permutation_t(const PermutationModel& model, const SolverConfig& config) {
  if (config.t_initial > 0.0) return config.t_initial;
  const int n = model.n();
  if (n < 2) return 1.0;
  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  FastEvaluator eval(model);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  shuffle_order(order, rng);
  double cur = eval(order);
  double sum = 0.0;
  const int samples = 100;
  for (int i = 0; i < samples; ++i) {
    Move m = propose_move(rng, n);
    apply_move(order, m);
    double cand = eval(order);
    sum += std::abs(cand - cur);
    cur = cand;
  }
  double mean = sum / samples;
  return mean > 0.0 ? mean : 1.0;
}

struct RestartResult {
  double objective = kInf;
  std::vector<int> order;
  bool swept = false;
};

RestartResult run_permutation_restart(const PermutationModel& model, const SolverConfig& config,
                                      double t_initial, int k, Clock::time_point start) {
  const int n = model.n();
  std::mt19937_64 rng(config.seed + static_cast<std::uint64_t>(k));
  FastEvaluator eval(model);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  shuffle_order(order, rng);
  double cur = eval(order);

  RestartResult best;
  best.objective = cur;
  best.order = order;
  if (n >= 2) {
    double t = t_initial;
    for (int sweep = 0; sweep < config.sweeps; ++sweep) {
      if (config.time_budget_ms && ms_since(start) >= *config.time_budget_ms) break;
      best.swept = true;
      for (int step = 0; step < n; ++step) {
        Move m = propose_move(rng, n);
        apply_move(order, m);
        double cand = eval(order);
        double delta = cand - cur;
        if (delta <= 0.0 || unit(rng) < std::exp(-delta / t)) {
          cur = cand;
          if (cur < best.objective) {
            best.objective = cur;
            best.order = order;
          }
        } else {
          revert_move(order, m);
        }
      }
      t *= config.cooling_alpha;
    }
  }
  best.objective = model.evaluate(best.order);
  return best;
}

Solution merge_permutation_results(const PermutationModel& model, const SolverConfig& config,
                                   const std::vector<RestartResult>& results,
                                   Clock::time_point start) {
  int best_k = 0;
  for (int k = 1; k < static_cast<int>(results.size()); ++k) {
    if (results[k].objective < results[best_k].objective) best_k = k;
  }
  int swept = 0;
  for (const RestartResult& r : results) swept += r.swept ? 1 : 0;

  Solution solution;
  solution.order = order_aliases(model.graph(), results[best_k].order);
  solution.objective = results[best_k].objective;
  solution.solver_id = "sa:nl";
  solution.restarts_used = model.n() < 2 ? config.restarts : swept;
  solution.valid = true;
  solution.wall_time_ms = ms_since(start);
  return solution;
}

std::vector<std::vector<std::pair<int, double>>> qubo_adjacency(const Qubo& qubo) {
  std::vector<std::vector<std::pair<int, double>>> adj(qubo.n_vars);
  for (const QuadTerm& t : qubo.quadratic) {
    adj[t.i].emplace_back(t.j, t.coeff);
    adj[t.j].emplace_back(t.i, t.coeff);
  }
  return adj;
}

std::vector<double> local_fields(const Qubo& qubo,
                                 const std::vector<std::vector<std::pair<int, double>>>& adj,
                                 const BinaryAssignment& x) {
  std::vector<double> field(qubo.linear);
  for (int i = 0; i < qubo.n_vars; ++i) {
    if (!x[i]) continue;
    for (const auto& [j, c] : adj[i]) field[j] += c;
  }
  return field;
}

double calibrate_qubo_t(const Qubo& qubo,
                        const std::vector<std::vector<std::pair<int, double>>>& adj,
                        const SolverConfig& config) {
  if (config.t_initial > 0.0) return config.t_initial;
  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  BinaryAssignment x(qubo.n_vars);
  for (auto& bit : x) bit = static_cast<std::uint8_t>(rng() & 1);
  std::vector<double> field = local_fields(qubo, adj, x);
  double sum = 0.0;
  const int samples = 100;
  for (int s = 0; s < samples; ++s) {
    int i = static_cast<int>(bounded(rng, static_cast<std::uint64_t>(qubo.n_vars)));
    double delta = x[i] ? -field[i] : field[i];
    sum += std::abs(delta);
    x[i] ^= 1;
    double sign = x[i] ? 1.0 : -1.0;
    for (const auto& [j, c] : adj[i]) field[j] += sign * c;
  }
  double mean = sum / samples;
  return mean > 0.0 ? mean : 1.0;
}

struct QuboRestart {
  double energy = kInf;
  BinaryAssignment x;
  bool swept = false;
};

QuboRestart run_qubo_restart(const Qubo& qubo,
                             const std::vector<std::vector<std::pair<int, double>>>& adj,
                             const SolverConfig& config, double t_initial, int k,
                             Clock::time_point start) {
  std::mt19937_64 rng(config.seed + static_cast<std::uint64_t>(k));
  BinaryAssignment x(qubo.n_vars);
  for (auto& bit : x) bit = static_cast<std::uint8_t>(rng() & 1);
  std::vector<double> field = local_fields(qubo, adj, x);
  double energy = qubo_energy(qubo, x);

  QuboRestart best;
  best.energy = energy;
  best.x = x;

  double t = t_initial;
  for (int sweep = 0; sweep < config.sweeps; ++sweep) {
    if (config.time_budget_ms && ms_since(start) >= *config.time_budget_ms) break;
    best.swept = true;
    for (int i = 0; i < qubo.n_vars; ++i) {
      double delta = x[i] ? -field[i] : field[i];
      if (delta <= 0.0 || unit(rng) < std::exp(-delta / t)) {
        x[i] ^= 1;
        energy += delta;
        double sign = x[i] ? 1.0 : -1.0;
        for (const auto& [j, c] : adj[i]) field[j] += sign * c;
        if (energy < best.energy) {
          best.energy = energy;
          best.x = x;
        }
      }
    }
    t *= config.cooling_alpha;
  }
  // Flip deltas accumulate rounding; report the exact energy of the kept state.
  best.energy = qubo_energy(qubo, best.x);
  return best;
}

QuboSample merge_qubo_results(const Qubo& qubo, const SolverConfig& config,
                              const std::vector<QuboRestart>& results, Clock::time_point start) {
  int best_k = 0;
  for (int k = 1; k < static_cast<int>(results.size()); ++k) {
    if (results[k].energy < results[best_k].energy) best_k = k;
  }
  int swept = 0;
  for (const QuboRestart& r : results) swept += r.swept ? 1 : 0;

  QuboSample sample;
  sample.assignment = results[best_k].x;
  sample.energy = results[best_k].energy;
  sample.restarts_used = qubo.n_vars < 1 ? config.restarts : swept;
  sample.wall_time_ms = ms_since(start);
  return sample;
}

std::uint32_t low_bit(std::uint32_t mask) { return mask & (0u - mask); }

bool joins_into(const JoinGraph& graph, std::uint32_t mask, int r) {
  for (const auto& [j, sel] : graph.neighbors(r)) {
    (void)sel;
    if (mask >> j & 1u) return true;
  }
  return false;
}

/// est[s] for every subset with >= 2 members, canonical evaluation per subset.
std::vector<double> subset_estimates(const JoinGraph& graph, std::uint32_t full) {
  std::vector<double> est(static_cast<std::size_t>(full) + 1, 0.0);
  for (std::uint32_t s = 3; s <= full; ++s) {
    if (std::popcount(s) >= 2) est[s] = estimate_cardinality(graph, s);
  }
  return est;
}

/// Prefix estimates summed tail first, mirroring the suffix-DP accumulation
/// bit for bit. Ranking orders by this key makes the exhaustive search and
/// dp_leftdeep agree exactly, ties included.
double suffix_sum_cost(const JoinGraph& graph, const std::vector<int>& order) {
  const int n = static_cast<int>(order.size());
  std::array<double, 9> est{};
  std::uint32_t mask = 0;
  for (int i = 0; i < n; ++i) {
    mask |= 1u << order[i];
    if (i >= 1) est[i + 1] = estimate_cardinality(graph, mask);
  }
  double cost = 0.0;
  for (int i = n; i >= 2; --i) cost = est[i] + cost;
  return cost;
}

std::vector<int> aliases_sorted(const JoinGraph& graph) {
  std::vector<int> by_alias(graph.relation_count());
  std::iota(by_alias.begin(), by_alias.end(), 0);
  std::sort(by_alias.begin(), by_alias.end(), [&](int a, int b) {
    return graph.relation(a).alias < graph.relation(b).alias;
  });
  return by_alias;
}

}  // namespace

SolverConfig default_solver_config(int n) {
  SolverConfig config;
  config.seed = 1;
  config.restarts = 16;
  config.sweeps = 200 * std::max(n, 1);
  config.t_initial = 0.0;
  config.cooling_alpha = 0.95;
  return config;
}

Solution solve_permutation_sa(const PermutationModel& model, const SolverConfig& config) {
  check_config(config);
  auto start = Clock::now();
  double t_initial = calibrate_permutation_t(model, config);
  std::vector<RestartResult> results(config.restarts);
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 0; k < config.restarts; ++k) {
    results[k] = run_permutation_restart(model, config, t_initial, k, start);
  }
  return merge_permutation_results(model, config, results, start);
}

Solution solve_permutation_sa_serial(const PermutationModel& model, const SolverConfig& config) {
  check_config(config);
  auto start = Clock::now();
  double t_initial = calibrate_permutation_t(model, config);
  std::vector<RestartResult> results(config.restarts);
  for (int k = 0; k < config.restarts; ++k) {
    results[k] = run_permutation_restart(model, config, t_initial, k, start);
  }
  return merge_permutation_results(model, config, results, start);
}

QuboSample solve_qubo_sa(const Qubo& qubo, const SolverConfig& config) {
  check_config(config);
  if (qubo.n_vars < 1) throw Error(ErrorKind::EmptyGraph, "binary model has no variables");
  auto start = Clock::now();
  auto adj = qubo_adjacency(qubo);
  double t_initial = calibrate_qubo_t(qubo, adj, config);
  std::vector<QuboRestart> results(config.restarts);
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 0; k < config.restarts; ++k) {
    results[k] = run_qubo_restart(qubo, adj, config, t_initial, k, start);
  }
  return merge_qubo_results(qubo, config, results, start);
}

QuboSample solve_qubo_sa_serial(const Qubo& qubo, const SolverConfig& config) {
  check_config(config);
  if (qubo.n_vars < 1) throw Error(ErrorKind::EmptyGraph, "binary model has no variables");
  auto start = Clock::now();
  auto adj = qubo_adjacency(qubo);
  double t_initial = calibrate_qubo_t(qubo, adj, config);
  std::vector<QuboRestart> results(config.restarts);
  for (int k = 0; k < config.restarts; ++k) {
    results[k] = run_qubo_restart(qubo, adj, config, t_initial, k, start);
  }
  return merge_qubo_results(qubo, config, results, start);
}

std::vector<std::string> repair(const Qubo& qubo, const BinaryAssignment& x) {
  if (static_cast<int>(x.size()) != qubo.n_vars) {
    throw Error(ErrorKind::LengthMismatch, "assignment length does not match the model");
  }
  DecodeResult decoded = decode(qubo, x);
  if (decoded.ok()) return *decoded.order;

  const int n = qubo.n;
  std::vector<int> by_alias(n);
  std::iota(by_alias.begin(), by_alias.end(), 0);
  std::sort(by_alias.begin(), by_alias.end(),
            [&](int a, int b) { return qubo.aliases[a] < qubo.aliases[b]; });

  std::vector<char> used(n, 0);
  std::vector<std::string> order;
  order.reserve(n);
  for (int s = 0; s < n; ++s) {
    int pick = -1;
    for (int r : by_alias) {
      if (!used[r] && x[qubo.index(r, s)]) {
        pick = r;
        break;
      }
    }
    if (pick < 0) {
      for (int r : by_alias) {
        if (!used[r]) {
          pick = r;
          break;
        }
      }
    }
    used[pick] = 1;
    order.push_back(qubo.aliases[pick]);
  }
  return order;
}

std::pair<std::vector<std::string>, double> dp_leftdeep(const JoinGraph& graph,
                                                        bool forbid_cross_products) {
  const int n = graph.relation_count();
  if (n > 20) throw Error(ErrorKind::TooLarge, "oracle unavailable above n=20");
  if (n == 1) return {{graph.relation(0).alias}, 0.0};

  const std::uint32_t full = (1u << n) - 1u;
  std::vector<double> est = subset_estimates(graph, full);

  // g[s]: cheapest completion cost from prefix set s to the full set.
  std::vector<double> g(static_cast<std::size_t>(full) + 1, kInf);
  g[full] = 0.0;
  for (std::uint32_t s = full - 1;; --s) {
    double best = kInf;
    for (int r = 0; r < n; ++r) {
      if (s >> r & 1u) continue;
      if (forbid_cross_products && s != 0 && !joins_into(graph, s, r)) continue;
      std::uint32_t ns = s | (1u << r);
      double v = est[ns] + g[ns];
      if (v < best) best = v;
    }
    g[s] = best;
    if (s == 0) break;
  }
  if (g[0] == kInf) {
    throw Error(ErrorKind::ConfigError, "no cross-product-free order exists");
  }

  // Reconstruct the alias-smallest order whose folded total reproduces g[0]
  // exactly. Testing the whole sum rather than the local remainder keeps ties
  // identical to a lexicographic scan over complete permutations: a prefix
  // term can absorb a sub-ulp suffix difference that g[s] alone would reject.
  std::vector<int> by_alias = aliases_sorted(graph);
  std::vector<int> order;
  order.reserve(n);
  std::vector<double> prefix_terms;
  prefix_terms.reserve(n);
  std::uint32_t s = 0;
  while (s != full) {
    int pick = -1;
    for (int r : by_alias) {
      if (s >> r & 1u) continue;
      if (forbid_cross_products && s != 0 && !joins_into(graph, s, r)) continue;
      std::uint32_t ns = s | (1u << r);
      double total = est[ns] + g[ns];
      for (auto it = prefix_terms.rbegin(); it != prefix_terms.rend(); ++it) total = *it + total;
      if (total == g[0]) {
        pick = r;
        break;
      }
    }
    if (pick < 0) throw Error(ErrorKind::ConfigError, "no cross-product-free order exists");
    order.push_back(pick);
    s |= 1u << pick;
    if (std::popcount(s) >= 2) prefix_terms.push_back(est[s]);
  }
  return {order_aliases(graph, order), plan_cost_cout(graph, order)};
}

std::pair<JoinTree, double> dp_bushy(const JoinGraph& graph) {
  const int n = graph.relation_count();
  if (n < 2) throw Error(ErrorKind::TooSmall, "bushy oracle needs at least two relations");
  if (n > 16) throw Error(ErrorKind::TooLarge, "oracle unavailable above n=16");

  const std::uint32_t full = (1u << n) - 1u;
  std::vector<double> est = subset_estimates(graph, full);

  std::vector<double> best(static_cast<std::size_t>(full) + 1, kInf);
  std::vector<std::uint32_t> split(static_cast<std::size_t>(full) + 1, 0);
  for (int r = 0; r < n; ++r) best[1u << r] = 0.0;

  for (std::uint32_t s = 3; s <= full; ++s) {
    if (std::popcount(s) < 2) continue;
    const std::uint32_t lo = low_bit(s);
    double b = kInf;
    std::uint32_t b_sub = 0;
    for (std::uint32_t sub = (s - 1) & s; sub; sub = (sub - 1) & s) {
      if (!(sub & lo)) continue;  // fix the lowest member on the left side
      double v = best[sub] + best[s ^ sub];
      if (v < b || (v == b && sub < b_sub)) {
        b = v;
        b_sub = sub;
      }
    }
    best[s] = est[s] + b;
    split[s] = b_sub;
  }

  struct Builder {
    const JoinGraph& graph;
    const std::vector<std::uint32_t>& split;
    JoinTree build(std::uint32_t mask) const {
      if (std::popcount(mask) == 1) {
        return JoinTree::leaf(graph.relation(std::countr_zero(mask)).alias);
      }
      std::uint32_t left = split[mask];
      return JoinTree::join(build(left), build(mask ^ left));
    }
  };
  Builder builder{graph, split};
  return {builder.build(full), best[full]};
}

std::pair<std::vector<std::string>, double> exhaustive(const JoinGraph& graph,
                                                       bool forbid_cross_products) {
  const int n = graph.relation_count();
  if (n > 8) throw Error(ErrorKind::TooLarge, "oracle unavailable above n=8");
  if (n == 1) return {{graph.relation(0).alias}, 0.0};

  std::vector<int> perm = aliases_sorted(graph);
  auto alias_less = [&](int a, int b) { return graph.relation(a).alias < graph.relation(b).alias; };

  std::vector<int> best_order;
  double best_key = kInf;
  do {
    if (forbid_cross_products && has_cross_product(graph, perm)) continue;
    double key = suffix_sum_cost(graph, perm);
    if (key < best_key) {
      best_key = key;
      best_order = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end(), alias_less));

  if (best_order.empty()) {
    throw Error(ErrorKind::ConfigError, "no cross-product-free order exists");
  }
  return {order_aliases(graph, best_order), plan_cost_cout(graph, best_order)};
}

Solution LocalRemoteSolver::solve(const PermutationModel& model, double budget_ms) {
  SolverConfig config = base_;
  if (budget_ms > 0.0) config.time_budget_ms = budget_ms;
  return solve_permutation_sa(model, config);
}

StubRemoteSolver StubRemoteSolver::from_file(const std::string& path, bool simulate_latency) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open replay file: " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedInput, std::string("replay file: ") + e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorKind::MalformedInput, "replay file: expected an object keyed by instance");
  }
  std::map<std::string, ReplayEntry> entries;
  for (const auto& [name, body] : doc.items()) {
    if (!body.is_object() || !body.contains("order") || !body["order"].is_array()) {
      throw Error(ErrorKind::MalformedInput, "replay entry '" + name + "' lacks an order array");
    }
    ReplayEntry entry;
    for (const auto& alias : body["order"]) {
      if (!alias.is_string()) {
        throw Error(ErrorKind::MalformedInput, "replay entry '" + name + "' has a non-string alias");
      }
      entry.order.push_back(alias.get<std::string>());
    }
    if (body.contains("objective") && body["objective"].is_number()) {
      entry.objective = body["objective"].get<double>();
    }
    if (body.contains("simulated_latency_ms") && body["simulated_latency_ms"].is_number()) {
      entry.simulated_latency_ms = body["simulated_latency_ms"].get<double>();
    }
    entries.emplace(name, std::move(entry));
  }
  return StubRemoteSolver(std::move(entries), 2800.0, simulate_latency);
}

Solution StubRemoteSolver::solve(const PermutationModel& model, double budget_ms) {
  (void)budget_ms;
  const std::string& name = model.graph().name();
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    throw Error(ErrorKind::ReplayMissing, "no replay entry for instance '" + name + "'");
  }
  const ReplayEntry& entry = it->second;
  double latency =
      entry.simulated_latency_ms >= 0.0 ? entry.simulated_latency_ms : default_latency_ms_;
  if (simulate_latency_) {
    std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(latency));
  }
  Solution solution;
  solution.order = entry.order;
  solution.objective = model.evaluate(entry.order);
  solution.wall_time_ms = latency;
  solution.solver_id = id();
  solution.restarts_used = 0;
  solution.valid = true;
  return solution;
}

Solution remote_solve(const PermutationModel& model, double budget_ms, RemoteSolver& endpoint) {
  auto start = Clock::now();
  Solution solution = endpoint.solve(model, budget_ms);
  double round_trip = ms_since(start);
  if (solution.wall_time_ms <= 0.0) solution.wall_time_ms = round_trip;
  solution.solver_id = endpoint.id();
  return solution;
}

}  // namespace q2o
