#pragma once

#include <memory>
#include <string>
#include <vector>

#include "q2o/error.hpp"

namespace q2o {

/// Immutable binary join tree; a node is either a leaf alias or a join of two
/// subtrees. Copies are cheap (shared structure).
class JoinTree {
 public:
  JoinTree() = default;  // empty leaf; produced only as a placeholder

  static JoinTree leaf(std::string alias);
  static JoinTree join(JoinTree left, JoinTree right);

  bool is_leaf() const { return !left_; }
  const std::string& alias() const { return alias_; }
  const JoinTree& left() const { return *left_; }
  const JoinTree& right() const { return *right_; }

  /// Left-to-right leaf alias sequence.
  std::vector<std::string> leaves() const;
  int leaf_count() const;

  friend bool operator==(const JoinTree& a, const JoinTree& b);

 private:
  std::string alias_;
  std::shared_ptr<const JoinTree> left_;
  std::shared_ptr<const JoinTree> right_;
};

/// A pg_hint_plan Leading hint and the tree it encodes.
struct PlanHint {
  std::string text;
  JoinTree tree;
};

/// Left-deep tree over the order: ((...(a1 a2) a3)... an). Needs >= 2 aliases.
JoinTree order_to_tree(const std::vector<std::string>& order);

/// Renders "/*+ Leading((...)) */" with single-space separators.
PlanHint emit_leading_hint(const JoinTree& tree);

/// Inverse of emit_leading_hint; throws Malformed on anything outside the grammar.
JoinTree parse_leading_hint(const std::string& text);

/// Hint text, newline, then the query with leading whitespace trimmed.
std::string prepend_hint(const std::string& sql, const PlanHint& hint);

}  // namespace q2o
