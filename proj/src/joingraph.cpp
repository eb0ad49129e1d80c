#include "q2o/joingraph.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include <json.hpp>

namespace q2o {

namespace {

bool valid_alias(const std::string& alias) {
  if (alias.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(alias[0])) || alias[0] == '_')) return false;
  for (char c : alias) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

}  // namespace

JoinGraph::JoinGraph(std::string name, std::vector<Relation> relations,
                     const std::vector<EdgeSpec>& edges, std::string sql)
    : name_(std::move(name)), sql_(std::move(sql)), relations_(std::move(relations)) {
  if (relations_.empty()) {
    throw Error(ErrorKind::EmptyGraph, "instance has zero relations");
  }
  for (int i = 0; i < static_cast<int>(relations_.size()); ++i) {
    Relation& r = relations_[i];
    if (!valid_alias(r.alias)) {
      throw Error(ErrorKind::MalformedInput, "bad alias '" + r.alias + "'");
    }
    if (!index_.emplace(r.alias, i).second) {
      throw Error(ErrorKind::DuplicateAlias, "alias '" + r.alias + "' appears twice");
    }
    r.cardinality = std::max(1.0, r.cardinality);
  }

  // Merge duplicate predicates on the same unordered pair multiplicatively.
  std::map<std::pair<int, int>, double> merged;
  for (const auto& [left, right, selectivity] : edges) {
    int l = index_of(left);
    int r = index_of(right);
    if (l == r) {
      throw Error(ErrorKind::MalformedInput, "self join edge on '" + left + "'");
    }
    if (!(selectivity > 0.0) || selectivity > 1.0) {
      throw Error(ErrorKind::BadSelectivity,
                  "selectivity for " + left + "-" + right + " outside (0, 1]");
    }
    auto key = std::minmax(l, r);
    auto [it, inserted] = merged.emplace(key, selectivity);
    if (!inserted) it->second *= selectivity;
  }
  edges_.reserve(merged.size());
  adjacency_.resize(relations_.size());
  for (const auto& [key, selectivity] : merged) {
    edges_.push_back({key.first, key.second, selectivity});
    adjacency_[key.first].emplace_back(key.second, selectivity);
    adjacency_[key.second].emplace_back(key.first, selectivity);
  }
}

int JoinGraph::index_of(const std::string& alias) const {
  auto it = index_.find(alias);
  if (it == index_.end()) {
    throw Error(ErrorKind::UnknownAlias, "alias '" + alias + "' not in graph");
  }
  return it->second;
}

JoinGraph JoinGraph::parse(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedInput, e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorKind::MalformedInput, "instance file must be a JSON object");
  }

  std::vector<Relation> relations;
  std::vector<EdgeSpec> edges;
  std::string name;
  std::string sql;
  try {
    name = doc.value("name", std::string());
    sql = doc.value("sql", std::string());
    for (const auto& rel : doc.value("relations", nlohmann::json::array())) {
      relations.push_back({rel.at("alias").get<std::string>(),
                           rel.value("table", std::string()),
                           rel.value("cardinality", 1.0)});
    }
    for (const auto& join : doc.value("joins", nlohmann::json::array())) {
      edges.emplace_back(join.at("left").get<std::string>(),
                         join.at("right").get<std::string>(),
                         join.at("selectivity").get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedInput, e.what());
  }
  return JoinGraph(std::move(name), std::move(relations), edges, std::move(sql));
}

std::string JoinGraph::serialize() const {
  nlohmann::ordered_json doc;
  doc["name"] = name_;
  if (!sql_.empty()) doc["sql"] = sql_;

  std::vector<int> order(relations_.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return relations_[a].alias < relations_[b].alias;
  });

  auto rels = nlohmann::ordered_json::array();
  for (int i : order) {
    const Relation& r = relations_[i];
    rels.push_back({{"alias", r.alias}, {"table", r.table_name}, {"cardinality", r.cardinality}});
  }
  doc["relations"] = std::move(rels);

  std::vector<std::tuple<std::string, std::string, double>> sorted_edges;
  for (const JoinEdge& e : edges_) {
    auto pair = std::minmax(relations_[e.left].alias, relations_[e.right].alias);
    sorted_edges.emplace_back(pair.first, pair.second, e.selectivity);
  }
  std::sort(sorted_edges.begin(), sorted_edges.end());
  auto joins = nlohmann::ordered_json::array();
  for (const auto& [left, right, selectivity] : sorted_edges) {
    joins.push_back({{"left", left}, {"right", right}, {"selectivity", selectivity}});
  }
  doc["joins"] = std::move(joins);
  return doc.dump(2) + "\n";
}

std::vector<std::string> validate(const JoinGraph& graph) {
  std::vector<std::string> warnings;
  if (connected_components(graph).size() > 1) {
    warnings.push_back("disconnected: cross product required");
  }
  if (graph.relation_count() > 20) {
    warnings.push_back("oracle unavailable above n=20");
  }
  if (graph.sql().empty()) {
    warnings.push_back("missing sql text: end-to-end benchmarking needs the query");
  }
  return warnings;
}

std::vector<std::vector<std::string>> connected_components(const JoinGraph& graph) {
  int n = graph.relation_count();
  std::vector<int> component(n, -1);
  int count = 0;
  for (int start = 0; start < n; ++start) {
    if (component[start] != -1) continue;
    std::vector<int> stack{start};
    component[start] = count;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (const auto& [next, sel] : graph.neighbors(v)) {
        if (component[next] == -1) {
          component[next] = count;
          stack.push_back(next);
        }
      }
    }
    ++count;
  }
  std::vector<std::vector<std::string>> groups(count);
  for (int i = 0; i < n; ++i) {
    groups[component[i]].push_back(graph.relation(i).alias);
  }
  return groups;
}

}  // namespace q2o
