#include "q2o/costmodel.hpp"

#include <cmath>

namespace q2o {

namespace {

void check_permutation(const JoinGraph& graph, const std::vector<int>& order) {
  int n = graph.relation_count();
  if (static_cast<int>(order.size()) != n) {
    throw Error(ErrorKind::NotAPermutation, "order has wrong length");
  }
  std::vector<char> seen(n, 0);
  for (int position : order) {
    if (position < 0 || position >= n || seen[position]) {
      throw Error(ErrorKind::NotAPermutation, "order is not a permutation of the relations");
    }
    seen[position] = 1;
  }
}

// Prefix cardinalities for positions 2..n, each evaluated canonically per
// subset so equal prefix sets give bit-identical values.
template <typename Fn>
void for_each_prefix_estimate(const JoinGraph& graph, const std::vector<int>& order, Fn&& fn) {
  int n = static_cast<int>(order.size());
  if (n <= kMaxSubsetRelations) {
    RelationSubset prefix = RelationSubset{1} << order[0];
    for (int s = 1; s < n; ++s) {
      prefix |= RelationSubset{1} << order[s];
      fn(estimate_cardinality(graph, prefix));
    }
    return;
  }
  // Wide-graph fallback: incremental products (oracles never reach this size).
  std::vector<char> placed(graph.relation_count(), 0);
  placed[order[0]] = 1;
  double rows = graph.relation(order[0]).cardinality;
  for (int s = 1; s < n; ++s) {
    int added = order[s];
    rows *= graph.relation(added).cardinality;
    for (const auto& [other, selectivity] : graph.neighbors(added)) {
      if (placed[other]) rows *= selectivity;
    }
    placed[added] = 1;
    fn(rows);
  }
}

}  // namespace

double estimate_cardinality(const JoinGraph& graph, RelationSubset subset) {
  if (subset == 0) {
    throw Error(ErrorKind::EmptySubset, "cardinality of the empty subset is undefined");
  }
  int n = graph.relation_count();
  double rows = 1.0;
  for (int i = 0; i < n && i < kMaxSubsetRelations; ++i) {
    if (subset & (RelationSubset{1} << i)) rows *= graph.relation(i).cardinality;
  }
  for (const JoinEdge& e : graph.edges()) {
    bool left_in = (subset >> e.left) & 1;
    bool right_in = (subset >> e.right) & 1;
    if (left_in && right_in) rows *= e.selectivity;
  }
  return rows;
}

double plan_cost_cout(const JoinGraph& graph, const std::vector<int>& order) {
  check_permutation(graph, order);
  double cost = 0.0;
  for_each_prefix_estimate(graph, order, [&](double rows) { cost += rows; });
  return cost;
}

double plan_cost_cout(const JoinGraph& graph, const std::vector<std::string>& order) {
  return plan_cost_cout(graph, order_indices(graph, order));
}

double plan_cost_logproduct(const JoinGraph& graph, const std::vector<int>& order) {
  check_permutation(graph, order);
  double cost = 0.0;
  for_each_prefix_estimate(graph, order, [&](double rows) { cost += std::log2(rows); });
  return cost;
}

double plan_cost_logproduct(const JoinGraph& graph, const std::vector<std::string>& order) {
  return plan_cost_logproduct(graph, order_indices(graph, order));
}

bool has_cross_product(const JoinGraph& graph, const std::vector<int>& order) {
  check_permutation(graph, order);
  std::vector<char> placed(graph.relation_count(), 0);
  placed[order[0]] = 1;
  for (size_t s = 1; s < order.size(); ++s) {
    bool connected = false;
    for (const auto& [other, sel] : graph.neighbors(order[s])) {
      if (placed[other]) {
        connected = true;
        break;
      }
    }
    if (!connected) return true;
    placed[order[s]] = 1;
  }
  return false;
}

std::vector<int> order_indices(const JoinGraph& graph, const std::vector<std::string>& order) {
  std::vector<int> indices;
  indices.reserve(order.size());
  for (const std::string& alias : order) indices.push_back(graph.index_of(alias));
  check_permutation(graph, indices);
  return indices;
}

std::vector<std::string> order_aliases(const JoinGraph& graph, const std::vector<int>& order) {
  std::vector<std::string> aliases;
  aliases.reserve(order.size());
  for (int position : order) aliases.push_back(graph.relation(position).alias);
  return aliases;
}

}  // namespace q2o
