#include "q2o/hints.hpp"

#include <cctype>

namespace q2o {

namespace {

constexpr const char* kPrefix = "/*+ Leading(";
constexpr const char* kSuffix = ") */";

void render(const JoinTree& tree, std::string& out) {
  if (tree.is_leaf()) {
    out += tree.alias();
    return;
  }
  out += '(';
  render(tree.left(), out);
  out += ' ';
  render(tree.right(), out);
  out += ')';
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  JoinTree parse() {
    expect(kPrefix);
    JoinTree tree = node();
    expect(kSuffix);
    if (pos_ != text_.size()) fail("trailing characters after hint");
    return tree;
  }

 private:
  JoinTree node() {
    if (peek() == '(') {
      ++pos_;
      JoinTree left = node();
      if (peek() != ' ') fail("expected single space between siblings");
      ++pos_;
      JoinTree right = node();
      if (peek() != ')') fail("unbalanced parentheses");
      ++pos_;
      return JoinTree::join(std::move(left), std::move(right));
    }
    return JoinTree::leaf(alias());
  }

  std::string alias() {
    size_t start = pos_;
    char c = peek();
    if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) {
      fail("expected alias");
    }
    ++pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void expect(const char* literal) {
    for (const char* p = literal; *p; ++p) {
      if (pos_ >= text_.size() || text_[pos_] != *p) fail("hint does not match grammar");
      ++pos_;
    }
  }

  [[noreturn]] void fail(const std::string& why) {
    throw Error(ErrorKind::Malformed, why + " at offset " + std::to_string(pos_));
  }

  const std::string& text_;
  size_t pos_ = 0;
};

}  // namespace

JoinTree JoinTree::leaf(std::string alias) {
  JoinTree tree;
  tree.alias_ = std::move(alias);
  return tree;
}

JoinTree JoinTree::join(JoinTree left, JoinTree right) {
  JoinTree tree;
  tree.left_ = std::make_shared<const JoinTree>(std::move(left));
  tree.right_ = std::make_shared<const JoinTree>(std::move(right));
  return tree;
}

std::vector<std::string> JoinTree::leaves() const {
  std::vector<std::string> out;
  if (is_leaf()) {
    out.push_back(alias_);
    return out;
  }
  auto left_leaves = left().leaves();
  auto right_leaves = right().leaves();
  out.reserve(left_leaves.size() + right_leaves.size());
  out.insert(out.end(), left_leaves.begin(), left_leaves.end());
  out.insert(out.end(), right_leaves.begin(), right_leaves.end());
  return out;
}

int JoinTree::leaf_count() const {
  return is_leaf() ? 1 : left().leaf_count() + right().leaf_count();
}

bool operator==(const JoinTree& a, const JoinTree& b) {
  if (a.is_leaf() != b.is_leaf()) return false;
  if (a.is_leaf()) return a.alias_ == b.alias_;
  return *a.left_ == *b.left_ && *a.right_ == *b.right_;
}

JoinTree order_to_tree(const std::vector<std::string>& order) {
  if (order.size() < 2) {
    throw Error(ErrorKind::TooFewRelations, "a join tree needs at least 2 relations");
  }
  JoinTree tree = JoinTree::join(JoinTree::leaf(order[0]), JoinTree::leaf(order[1]));
  for (size_t i = 2; i < order.size(); ++i) {
    tree = JoinTree::join(std::move(tree), JoinTree::leaf(order[i]));
  }
  return tree;
}

PlanHint emit_leading_hint(const JoinTree& tree) {
  if (tree.leaf_count() < 2) {
    throw Error(ErrorKind::TooFewRelations, "Leading hint needs at least 2 relations");
  }
  std::string text = kPrefix;
  render(tree, text);
  text += kSuffix;
  return PlanHint{std::move(text), tree};
}

JoinTree parse_leading_hint(const std::string& text) {
  return Parser(text).parse();
}

std::string prepend_hint(const std::string& sql, const PlanHint& hint) {
  size_t start = sql.find_first_not_of(" \t\r\n");
  if (sql.empty() || start == std::string::npos) {
    throw Error(ErrorKind::EmptySql, "no statement to hint");
  }
  return hint.text + "\n" + sql.substr(start);
}

}  // namespace q2o
