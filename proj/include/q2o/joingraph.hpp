#pragma once

#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "q2o/error.hpp"

namespace q2o {

/// Base relation with the statistics the optimizer works from.
struct Relation {
  std::string alias;
  std::string table_name;
  double cardinality = 1.0;  // rows, clamped to >= 1 at load
};

/// Join predicate between two relations, stored as positions with left < right.
struct JoinEdge {
  int left = 0;
  int right = 0;
  double selectivity = 1.0;  // in (0, 1]
};

/// Edge as it appears in input: (left alias, right alias, selectivity).
using EdgeSpec = std::tuple<std::string, std::string, double>;

/// A join-order instance: relations with cardinalities plus join edges with
/// selectivities. Immutable after construction; safe to share across threads.
class JoinGraph {
 public:
  JoinGraph(std::string name, std::vector<Relation> relations,
            const std::vector<EdgeSpec>& edges, std::string sql = "");

  /// Parses the JSON instance format. Duplicate edges are merged by
  /// multiplying selectivities; cardinalities below 1 are clamped to 1.
  static JoinGraph parse(const std::string& text);

  /// Canonical serialization: aliases sorted, edges sorted by alias pair,
  /// fixed key order. parse(serialize(g)) is a fixpoint.
  std::string serialize() const;

  const std::string& name() const { return name_; }
  const std::string& sql() const { return sql_; }
  int relation_count() const { return static_cast<int>(relations_.size()); }
  const std::vector<Relation>& relations() const { return relations_; }
  const Relation& relation(int position) const { return relations_[position]; }
  const std::vector<JoinEdge>& edges() const { return edges_; }

  /// Position of an alias; throws UnknownAlias.
  int index_of(const std::string& alias) const;
  bool has_alias(const std::string& alias) const { return index_.count(alias) > 0; }

  /// Neighbors of a relation as (position, selectivity) pairs.
  const std::vector<std::pair<int, double>>& neighbors(int position) const {
    return adjacency_[position];
  }

 private:
  std::string name_;
  std::string sql_;
  std::vector<Relation> relations_;
  std::vector<JoinEdge> edges_;  // normalized, sorted by (left, right)
  std::unordered_map<std::string, int> index_;
  std::vector<std::vector<std::pair<int, double>>> adjacency_;
};

/// Non-fatal findings: disconnected graph, n above the oracle limit, missing sql.
std::vector<std::string> validate(const JoinGraph& graph);

/// Maximal edge-connected groups of aliases, each in relation-position order.
std::vector<std::vector<std::string>> connected_components(const JoinGraph& graph);

}  // namespace q2o
