#include "q2o/encoders.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>

namespace q2o {

namespace {

std::string shortest(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

double PermutationModel::evaluate(const std::vector<int>& order) const {
  double cost = objective_ == Objective::kCout ? plan_cost_cout(*graph_, order)
                                               : plan_cost_logproduct(*graph_, order);
  if (forbid_cross_ && has_cross_product(*graph_, order)) {
    cost += kCrossProductPenalty;
  }
  return cost;
}

double PermutationModel::evaluate(const std::vector<std::string>& order) const {
  return evaluate(order_indices(*graph_, order));
}

PermutationModel build_nl_model(const JoinGraph& graph, Objective objective,
                                bool forbid_cross_products) {
  if (graph.relation_count() < 1) {
    throw Error(ErrorKind::EmptyGraph, "cannot build a model over zero relations");
  }
  return PermutationModel(graph, objective, forbid_cross_products);
}

Qubo build_qubo(const JoinGraph& graph) {
  int n = graph.relation_count();
  if (n < 1) throw Error(ErrorKind::EmptyGraph, "cannot encode zero relations");
  if (n < 2) throw Error(ErrorKind::TooSmall, "QUBO encoding needs at least 2 relations");

  Qubo qubo;
  qubo.n = n;
  qubo.n_vars = n * n;
  qubo.aliases.reserve(n);
  for (const Relation& r : graph.relations()) qubo.aliases.push_back(r.alias);
  qubo.linear.assign(qubo.n_vars, 0.0);

  double weight_sum = 0.0;
  for (const Relation& r : graph.relations()) weight_sum += std::log2(r.cardinality);
  for (const JoinEdge& e : graph.edges()) weight_sum += std::abs(std::log2(e.selectivity));
  qubo.penalty_weight = n * weight_sum + 1.0;

  std::map<std::pair<int, int>, double> quad;
  auto add_quad = [&](int i, int j, double coeff) {
    auto key = std::minmax(i, j);
    quad[key] += coeff;
  };

  // Cost terms. With X[r][s] = sum_{t<=s} x[r][t], each prefix ending at
  // position s (s = 1..n-1) contributes sum_r w_r*X[r][s] plus
  // sum_{(u,v) in E} w_uv*X[u][s]*X[v][s]. Expanding the prefix sums, the
  // variable x[r][t] appears in n - max(t, 1) prefixes.
  for (int r = 0; r < n; ++r) {
    double w = std::log2(graph.relation(r).cardinality);
    for (int t = 0; t < n; ++t) {
      qubo.linear[qubo.index(r, t)] += w * (n - std::max(t, 1));
    }
  }
  for (const JoinEdge& e : graph.edges()) {
    double w = std::log2(e.selectivity);
    for (int t = 0; t < n; ++t) {
      for (int u = 0; u < n; ++u) {
        add_quad(qubo.index(e.left, t), qubo.index(e.right, u),
                 w * (n - std::max({t, u, 1})));
      }
    }
  }

  // One-hot penalties: (1 - sum y)^2 = 1 - sum y + 2*sum_{pairs} y_i y_j
  // for binary y, once per relation row and per position column.
  double p = qubo.penalty_weight;
  qubo.offset = 2.0 * n * p;
  for (int r = 0; r < n; ++r) {
    for (int s = 0; s < n; ++s) {
      qubo.linear[qubo.index(r, s)] -= 2.0 * p;  // -P from its row, -P from its column
      for (int s2 = s + 1; s2 < n; ++s2) {
        add_quad(qubo.index(r, s), qubo.index(r, s2), 2.0 * p);
      }
      for (int r2 = r + 1; r2 < n; ++r2) {
        add_quad(qubo.index(r, s), qubo.index(r2, s), 2.0 * p);
      }
    }
  }

  qubo.quadratic.reserve(quad.size());
  for (const auto& [key, coeff] : quad) {
    qubo.quadratic.push_back({key.first, key.second, coeff});
  }
  return qubo;
}

double qubo_energy(const Qubo& qubo, const BinaryAssignment& x) {
  if (static_cast<int>(x.size()) != qubo.n_vars) {
    throw Error(ErrorKind::LengthMismatch, "assignment length does not match n^2 variables");
  }
  double energy = qubo.offset;
  for (int i = 0; i < qubo.n_vars; ++i) {
    if (x[i]) energy += qubo.linear[i];
  }
  for (const QuadTerm& term : qubo.quadratic) {
    if (x[term.i] && x[term.j]) energy += term.coeff;
  }
  return energy;
}

BinaryAssignment encode_order(const Qubo& qubo, const std::vector<std::string>& order) {
  if (static_cast<int>(order.size()) != qubo.n) {
    throw Error(ErrorKind::NotAPermutation, "order has wrong length");
  }
  BinaryAssignment x(qubo.n_vars, 0);
  std::vector<char> used(qubo.n, 0);
  for (int s = 0; s < qubo.n; ++s) {
    auto it = std::find(qubo.aliases.begin(), qubo.aliases.end(), order[s]);
    if (it == qubo.aliases.end()) {
      throw Error(ErrorKind::UnknownAlias, "alias '" + order[s] + "' not in model");
    }
    int r = static_cast<int>(it - qubo.aliases.begin());
    if (used[r]) throw Error(ErrorKind::NotAPermutation, "alias repeated in order");
    used[r] = 1;
    x[qubo.index(r, s)] = 1;
  }
  return x;
}

DecodeResult decode(const Qubo& qubo, const BinaryAssignment& x) {
  if (static_cast<int>(x.size()) != qubo.n_vars) {
    throw Error(ErrorKind::LengthMismatch, "assignment length does not match n^2 variables");
  }
  DecodeResult result;
  std::vector<int> position_of(qubo.n, -1);
  for (int r = 0; r < qubo.n; ++r) {
    int count = 0;
    for (int s = 0; s < qubo.n; ++s) {
      if (x[qubo.index(r, s)]) {
        ++count;
        position_of[r] = s;
      }
    }
    if (count != 1) result.report.rows.emplace_back(r, count);
  }
  for (int s = 0; s < qubo.n; ++s) {
    int count = 0;
    for (int r = 0; r < qubo.n; ++r) {
      if (x[qubo.index(r, s)]) ++count;
    }
    if (count != 1) result.report.cols.emplace_back(s, count);
  }
  if (!result.report.empty()) return result;

  std::vector<std::string> order(qubo.n);
  for (int r = 0; r < qubo.n; ++r) order[position_of[r]] = qubo.aliases[r];
  result.order = std::move(order);
  return result;
}

void dump_qubo(const Qubo& qubo, std::ostream& out) {
  out << "# offset " << shortest(qubo.offset) << "\n";
  out << "# penalty " << shortest(qubo.penalty_weight) << "\n";
  for (int i = 0; i < qubo.n_vars; ++i) {
    if (qubo.linear[i] != 0.0) {
      out << i << " " << i << " " << shortest(qubo.linear[i]) << "\n";
    }
  }
  for (const QuadTerm& term : qubo.quadratic) {
    out << term.i << " " << term.j << " " << shortest(term.coeff) << "\n";
  }
}

}  // namespace q2o
