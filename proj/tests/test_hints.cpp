#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "q2o/hints.hpp"

using namespace q2o;

namespace {

JoinTree random_tree(std::mt19937_64& rng, int first, int count) {
  if (count == 1) return JoinTree::leaf("t" + std::to_string(first));
  int left = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(count - 1));
  return JoinTree::join(random_tree(rng, first, left),
                        random_tree(rng, first + left, count - left));
}

}  // namespace

TEST_CASE("join trees know their leaves") {
  JoinTree t = JoinTree::join(JoinTree::join(JoinTree::leaf("a"), JoinTree::leaf("b")),
                              JoinTree::leaf("c"));
  CHECK(t.leaf_count() == 3);
  CHECK(t.leaves() == std::vector<std::string>{"a", "b", "c"});
  CHECK_FALSE(t.is_leaf());
  CHECK(t.left().leaf_count() == 2);
  CHECK(t.right().is_leaf());
  CHECK(t.right().alias() == "c");

  CHECK(t == t);
  JoinTree u = JoinTree::join(JoinTree::leaf("a"),
                              JoinTree::join(JoinTree::leaf("b"), JoinTree::leaf("c")));
  CHECK_FALSE(t == u);  // same leaves, different shape
}

TEST_CASE("order_to_tree builds the left-deep spine") {
  JoinTree t = order_to_tree({"ci", "t", "mc"});
  CHECK(t.leaves() == std::vector<std::string>{"ci", "t", "mc"});
  CHECK(t.left().left().alias() == "ci");
  CHECK(t.left().right().alias() == "t");
  CHECK(t.right().alias() == "mc");

  CHECK_THROWS_WITH_AS(order_to_tree({"a"}), doctest::Contains("TooFewRelations"), Error);
  CHECK_THROWS_AS(order_to_tree({}), Error);
}

TEST_CASE("emit_leading_hint renders the pg_hint_plan form") {
  PlanHint two = emit_leading_hint(order_to_tree({"a", "b"}));
  CHECK(two.text == "/*+ Leading((a b)) */");

  PlanHint three = emit_leading_hint(order_to_tree({"ci", "t", "mc"}));
  CHECK(three.text == "/*+ Leading(((ci t) mc)) */");

  JoinTree bushy = JoinTree::join(JoinTree::join(JoinTree::leaf("a"), JoinTree::leaf("b")),
                                  JoinTree::join(JoinTree::leaf("c"), JoinTree::leaf("d")));
  CHECK(emit_leading_hint(bushy).text == "/*+ Leading(((a b) (c d))) */");
  CHECK(emit_leading_hint(bushy).tree == bushy);
}

TEST_CASE("parse_leading_hint inverts emit") {
  JoinTree t = parse_leading_hint("/*+ Leading(((ci t) mc)) */");
  CHECK(t.leaves() == std::vector<std::string>{"ci", "t", "mc"});
  CHECK(t == order_to_tree({"ci", "t", "mc"}));
}

TEST_CASE("parse_leading_hint rejects anything outside the grammar") {
  CHECK_THROWS_WITH_AS(parse_leading_hint(""), doctest::Contains("Malformed"), Error);
  CHECK_THROWS_AS(parse_leading_hint("/*+ Leading((a b) */"), Error);
  CHECK_THROWS_AS(parse_leading_hint("/*+ Leading((a b)) "), Error);
  CHECK_THROWS_AS(parse_leading_hint("Leading((a b))"), Error);
  CHECK_THROWS_AS(parse_leading_hint("/*+ Leading((a  b)) */"), Error);
  CHECK_THROWS_AS(parse_leading_hint("/*+ Leading((a b)) */ extra"), Error);
  CHECK_THROWS_AS(parse_leading_hint("/*+ Leading((1a b)) */"), Error);
  CHECK_THROWS_AS(parse_leading_hint("/*+ Leading((a-b c)) */"), Error);
  CHECK_THROWS_AS(parse_leading_hint("/*+ Leading(()) */"), Error);
  CHECK_THROWS_AS(parse_leading_hint("/*+ Leading((a b c)) */"), Error);
}

TEST_CASE("hint round trip over random trees") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 200; ++i) {
    int leaves = 2 + static_cast<int>(rng() % 11);
    JoinTree t = random_tree(rng, 0, leaves);
    PlanHint hint = emit_leading_hint(t);
    CHECK(parse_leading_hint(hint.text) == t);
  }
}

TEST_CASE("single-alias hints parse") {
  JoinTree t = parse_leading_hint("/*+ Leading(x1) */");
  CHECK(t.is_leaf());
  CHECK(t.alias() == "x1");
}

TEST_CASE("prepend_hint") {
  PlanHint hint = emit_leading_hint(order_to_tree({"a", "b"}));
  CHECK(prepend_hint("SELECT 1", hint) == "/*+ Leading((a b)) */\nSELECT 1");
  CHECK(prepend_hint("  \n\tSELECT 1", hint) == "/*+ Leading((a b)) */\nSELECT 1");
  CHECK_THROWS_WITH_AS(prepend_hint("", hint), doctest::Contains("EmptySql"), Error);
  CHECK_THROWS_AS(prepend_hint("   ", hint), Error);
}
