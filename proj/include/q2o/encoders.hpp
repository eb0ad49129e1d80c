#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "q2o/costmodel.hpp"

namespace q2o {

enum class Objective { kCout, kLogProduct };

/// Added once to any order containing a cross product when the model forbids
/// them; dwarfs every reachable plan cost without overflowing arithmetic.
inline constexpr double kCrossProductPenalty = 1e30;

/// Direct permutation encoding: candidates are orderings of the relations,
/// evaluated under the chosen plan cost. Optionally penalizes cross-product
/// prefixes so searches stay on connected orders.
class PermutationModel {
 public:
  PermutationModel(const JoinGraph& graph, Objective objective,
                   bool forbid_cross_products = false)
      : graph_(&graph), objective_(objective), forbid_cross_(forbid_cross_products) {}

  // The model refers to the graph rather than owning it; a temporary would
  // dangle before the first evaluate call.
  PermutationModel(JoinGraph&&, Objective, bool = false) = delete;

  const JoinGraph& graph() const { return *graph_; }
  Objective objective() const { return objective_; }
  int n() const { return graph_->relation_count(); }
  bool forbids_cross_products() const { return forbid_cross_; }

  double evaluate(const std::vector<int>& order) const;
  double evaluate(const std::vector<std::string>& order) const;

 private:
  const JoinGraph* graph_;
  Objective objective_;
  bool forbid_cross_;
};

PermutationModel build_nl_model(const JoinGraph& graph, Objective objective,
                                bool forbid_cross_products = false);
PermutationModel build_nl_model(JoinGraph&&, Objective, bool = false) = delete;

/// Bit vector aligned with Qubo::index (length n^2).
using BinaryAssignment = std::vector<std::uint8_t>;

struct QuadTerm {
  int i = 0;
  int j = 0;  // i < j
  double coeff = 0.0;
};

/// One-hot binary quadratic model over n^2 variables x[r*n + s] meaning
/// "relation r sits at sequence position s". Valid one-hot assignments score
/// the log-product plan cost; every constraint violation pays the penalty
/// weight, chosen so infeasible minima cannot undercut feasible ones.
struct Qubo {
  int n = 0;
  int n_vars = 0;
  std::vector<std::string> aliases;       // by relation position
  std::vector<double> linear;             // size n_vars
  std::vector<QuadTerm> quadratic;        // sorted by (i, j), i < j
  double offset = 0.0;
  double penalty_weight = 0.0;

  int index(int relation, int position) const { return relation * n + position; }
};

Qubo build_qubo(const JoinGraph& graph);

double qubo_energy(const Qubo& qubo, const BinaryAssignment& x);

/// Permutation (alias order) -> one-hot assignment.
BinaryAssignment encode_order(const Qubo& qubo, const std::vector<std::string>& order);

/// One-hot constraints that do not sum to exactly 1, with their actual sums.
struct ViolationReport {
  std::vector<std::pair<int, int>> rows;  // (relation position, count)
  std::vector<std::pair<int, int>> cols;  // (sequence position, count)
  bool empty() const { return rows.empty() && cols.empty(); }
};

struct DecodeResult {
  std::optional<std::vector<std::string>> order;
  ViolationReport report;
  bool ok() const { return order.has_value(); }
};

/// Reads a permutation back out of an assignment, or reports which row or
/// column constraints it violates. Violations are data, not failures.
DecodeResult decode(const Qubo& qubo, const BinaryAssignment& x);

/// Text dump: "# offset" and "# penalty" comments, then "i j coeff" lines
/// (i == j for linear terms).
void dump_qubo(const Qubo& qubo, std::ostream& out);

}  // namespace q2o
