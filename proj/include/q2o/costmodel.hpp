#pragma once

#include <cstdint>
#include <vector>

#include "q2o/joingraph.hpp"

namespace q2o {

/// Subset of relations as a bitset keyed by relation position.
using RelationSubset = std::uint64_t;

inline constexpr int kMaxSubsetRelations = 64;

/// Estimated rows of the intermediate result joining every member of the
/// subset: product of member cardinalities times the selectivities of all
/// edges with both endpoints inside. Disconnected members cross-multiply.
///
/// Evaluation order is canonical (cardinalities in ascending position,
/// selectivities in edge storage order), so the same subset always yields a
/// bit-identical value regardless of how the caller arrived at it.
double estimate_cardinality(const JoinGraph& graph, RelationSubset subset);

/// C_out: sum of the intermediate-result sizes of all prefixes of length >= 2.
/// Zero for a single relation.
double plan_cost_cout(const JoinGraph& graph, const std::vector<int>& order);
double plan_cost_cout(const JoinGraph& graph, const std::vector<std::string>& order);

/// Log-product surrogate: sum over the same prefixes of log2(intermediate size).
double plan_cost_logproduct(const JoinGraph& graph, const std::vector<int>& order);
double plan_cost_logproduct(const JoinGraph& graph, const std::vector<std::string>& order);

/// True when some prefix extension joins a relation with no edge into the
/// prefix (a cross product).
bool has_cross_product(const JoinGraph& graph, const std::vector<int>& order);

/// Alias sequence -> position sequence; throws NotAPermutation unless the
/// input is a permutation of all aliases.
std::vector<int> order_indices(const JoinGraph& graph, const std::vector<std::string>& order);
std::vector<std::string> order_aliases(const JoinGraph& graph, const std::vector<int>& order);

}  // namespace q2o
