#include "q2o/pgclient.hpp"

#include <dlfcn.h>

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

#include <json.hpp>

#include "q2o/error.hpp"

namespace q2o {

// Entry points resolved from the system libpq at first use. Building against
// it directly would make the whole library unlinkable on hosts without the
// client headers, and only this translation unit ever touches a server.
struct LibPq {
  void* handle = nullptr;
  void* (*PQconnectdb)(const char*) = nullptr;
  int (*PQstatus)(const void*) = nullptr;
  char* (*PQerrorMessage)(const void*) = nullptr;
  void (*PQfinish)(void*) = nullptr;
  void* (*PQexec)(void*, const char*) = nullptr;
  void* (*PQexecParams)(void*, const char*, int, const unsigned int*, const char* const*,
                        const int*, const int*, int) = nullptr;
  int (*PQresultStatus)(const void*) = nullptr;
  char* (*PQresultErrorMessage)(const void*) = nullptr;
  char* (*PQresultErrorField)(const void*, int) = nullptr;
  int (*PQntuples)(const void*) = nullptr;
  char* (*PQgetvalue)(const void*, int, int) = nullptr;
  int (*PQgetisnull)(const void*, int, int) = nullptr;
  void (*PQclear)(void*) = nullptr;
};

namespace {

constexpr int kConnectionOk = 0;   // ConnStatusType CONNECTION_OK
constexpr int kCommandOk = 1;      // ExecStatusType PGRES_COMMAND_OK
constexpr int kTuplesOk = 2;       // ExecStatusType PGRES_TUPLES_OK
constexpr int kDiagSqlstate = 'C';
constexpr char kTimeoutSqlstate[] = "57014";  // query_canceled

std::string trimmed(const char* text) {
  if (!text) return {};
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

const LibPq& libpq() {
  static const LibPq lib = [] {
    LibPq l;
    l.handle = dlopen("libpq.so.5", RTLD_NOW | RTLD_LOCAL);
    if (!l.handle) l.handle = dlopen("libpq.so", RTLD_NOW | RTLD_LOCAL);
    if (!l.handle) {
      throw Error(ErrorKind::ConnectionError,
                  std::string("cannot load libpq: ") + (dlerror() ? dlerror() : "unknown"));
    }
    auto resolve = [&](auto& fn, const char* name) {
      void* p = dlsym(l.handle, name);
      if (!p) {
        throw Error(ErrorKind::ConnectionError, std::string("libpq lacks symbol ") + name);
      }
      fn = reinterpret_cast<std::remove_reference_t<decltype(fn)>>(p);
    };
    resolve(l.PQconnectdb, "PQconnectdb");
    resolve(l.PQstatus, "PQstatus");
    resolve(l.PQerrorMessage, "PQerrorMessage");
    resolve(l.PQfinish, "PQfinish");
    resolve(l.PQexec, "PQexec");
    resolve(l.PQexecParams, "PQexecParams");
    resolve(l.PQresultStatus, "PQresultStatus");
    resolve(l.PQresultErrorMessage, "PQresultErrorMessage");
    resolve(l.PQresultErrorField, "PQresultErrorField");
    resolve(l.PQntuples, "PQntuples");
    resolve(l.PQgetvalue, "PQgetvalue");
    resolve(l.PQgetisnull, "PQgetisnull");
    resolve(l.PQclear, "PQclear");
    return l;
  }();
  return lib;
}

class PgResult {
 public:
  PgResult(const LibPq& lib, void* res) : lib_(&lib), res_(res) {}
  ~PgResult() {
    if (res_) lib_->PQclear(res_);
  }
  PgResult(PgResult&& other) noexcept : lib_(other.lib_), res_(other.res_) {
    other.res_ = nullptr;
  }
  PgResult(const PgResult&) = delete;
  PgResult& operator=(const PgResult&) = delete;
  void* get() const { return res_; }

 private:
  const LibPq* lib_;
  void* res_;
};

void check_result(const LibPq& lib, void* conn, void* res) {
  if (!res) {
    throw Error(ErrorKind::ConnectionError, trimmed(lib.PQerrorMessage(conn)));
  }
  int status = lib.PQresultStatus(res);
  if (status == kCommandOk || status == kTuplesOk) return;
  std::string message = trimmed(lib.PQresultErrorMessage(res));
  const char* sqlstate = lib.PQresultErrorField(res, kDiagSqlstate);
  if (sqlstate && std::strcmp(sqlstate, kTimeoutSqlstate) == 0) {
    throw Error(ErrorKind::Timeout, message);
  }
  throw Error(ErrorKind::SqlError, message);
}

PgResult run_statement(const LibPq& lib, void* conn, const std::string& sql) {
  PgResult res(lib, lib.PQexec(conn, sql.c_str()));
  check_result(lib, conn, res.get());
  return res;
}

std::string quote_conninfo_value(const std::string& value) {
  std::string out = "'";
  for (char c : value) {
    if (c == '\'' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

void collect_leaves(const nlohmann::json& node, std::vector<std::string>& out) {
  if (!node.is_object()) return;
  auto alias = node.find("Alias");
  if (alias != node.end() && alias->is_string()) {
    out.push_back(alias->get<std::string>());
    return;
  }
  auto relation = node.find("Relation Name");
  if (relation != node.end() && relation->is_string()) {
    out.push_back(relation->get<std::string>());
    return;
  }
  auto children = node.find("Plans");
  if (children != node.end() && children->is_array()) {
    for (const auto& child : *children) collect_leaves(child, out);
  }
}

const nlohmann::json& explain_root(const nlohmann::json& doc) {
  if (doc.is_array()) {
    if (doc.empty() || !doc.front().is_object()) {
      throw Error(ErrorKind::ParseError, "explain document: empty or non-object array");
    }
    return doc.front();
  }
  if (doc.is_object()) return doc;
  throw Error(ErrorKind::ParseError, "explain document: expected an object or array");
}

double read_time_field(const nlohmann::json& root, const char* field) {
  auto it = root.find(field);
  if (it == root.end() || !it->is_number()) {
    throw Error(ErrorKind::ParseError, std::string("explain document: missing ") + field);
  }
  double v = it->get<double>();
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw Error(ErrorKind::ParseError, std::string("explain document: bad ") + field);
  }
  return v;
}

}  // namespace

std::optional<ConnectionSettings> ConnectionSettings::from_env() {
  const char* host = std::getenv("Q2O_PG_HOST");
  const char* port = std::getenv("Q2O_PG_PORT");
  const char* db = std::getenv("Q2O_PG_DB");
  const char* user = std::getenv("Q2O_PG_USER");
  const char* password = std::getenv("Q2O_PG_PASSWORD");
  if (!host && !port && !db && !user && !password) return std::nullopt;

  ConnectionSettings settings;
  if (host) settings.host = host;
  if (db) settings.database = db;
  if (user) settings.user = user;
  if (password) settings.password = password;
  if (port) {
    char* end = nullptr;
    long v = std::strtol(port, &end, 10);
    if (!end || *end != '\0' || v < 1 || v > 65535) {
      throw Error(ErrorKind::ConfigError, std::string("Q2O_PG_PORT out of range: ") + port);
    }
    settings.port = static_cast<int>(v);
  }
  return settings;
}

std::string ConnectionSettings::conninfo() const {
  std::string info = "host=" + quote_conninfo_value(host);
  info += " port=" + std::to_string(port);
  info += " dbname=" + quote_conninfo_value(database);
  info += " user=" + quote_conninfo_value(user);
  if (!password.empty()) info += " password=" + quote_conninfo_value(password);
  info += " connect_timeout=10";
  return info;
}

TimedRun parse_explain_document(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("explain document: ") + e.what());
  }
  const nlohmann::json& root = explain_root(doc);
  TimedRun run;
  run.planning_ms = read_time_field(root, "Planning Time");
  run.execution_ms = read_time_field(root, "Execution Time");
  run.plan_text = json_text;
  return run;
}

std::vector<std::string> plan_leaf_aliases(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("explain document: ") + e.what());
  }
  const nlohmann::json& root = explain_root(doc);
  auto plan = root.find("Plan");
  if (plan == root.end() || !plan->is_object()) {
    throw Error(ErrorKind::ParseError, "explain document: missing Plan");
  }
  std::vector<std::string> leaves;
  collect_leaves(*plan, leaves);
  return leaves;
}

double clamp_cardinality(double reltuples) {
  if (!std::isfinite(reltuples) || reltuples < 1.0) return 1.0;
  return reltuples;
}

bool leading_hint_honored(const PlanHint& hint, const std::vector<std::string>& plan_leaves) {
  return hint.tree.leaves() == plan_leaves;
}

PgConnection::PgConnection(const ConnectionSettings& settings) : lib_(&libpq()) {
  if (settings.port < 1 || settings.port > 65535) {
    throw Error(ErrorKind::ConfigError, "port must lie in [1, 65535]");
  }
  if (settings.statement_timeout_ms < 0) {
    throw Error(ErrorKind::ConfigError, "statement_timeout_ms must be >= 0");
  }
  conn_ = lib_->PQconnectdb(settings.conninfo().c_str());
  if (!conn_ || lib_->PQstatus(conn_) != kConnectionOk) {
    std::string message = conn_ ? trimmed(lib_->PQerrorMessage(conn_)) : "out of memory";
    if (conn_) lib_->PQfinish(conn_);
    conn_ = nullptr;
    throw Error(ErrorKind::ConnectionError, message);
  }
  run_statement(*lib_, conn_,
                "SET statement_timeout = " + std::to_string(settings.statement_timeout_ms));
}

PgConnection::~PgConnection() {
  if (conn_) lib_->PQfinish(conn_);
}

void PgConnection::execute(const std::string& sql) {
  run_statement(*lib_, conn_, sql);
}

double PgConnection::fetch_cardinality(const std::string& table_name) {
  const char* params[1] = {table_name.c_str()};
  PgResult res(*lib_, lib_->PQexecParams(conn_, "SELECT reltuples FROM pg_class WHERE relname = $1",
                                         1, nullptr, params, nullptr, nullptr, 0));
  check_result(*lib_, conn_, res.get());
  if (lib_->PQntuples(res.get()) < 1) {
    throw Error(ErrorKind::NoSuchTable, table_name);
  }
  if (lib_->PQgetisnull(res.get(), 0, 0)) return 1.0;
  return clamp_cardinality(std::strtod(lib_->PQgetvalue(res.get(), 0, 0), nullptr));
}

TimedRun PgConnection::explain_analyze(const std::string& sql) {
  PgResult res = run_statement(*lib_, conn_, "EXPLAIN (ANALYZE, FORMAT JSON) " + sql);
  if (lib_->PQntuples(res.get()) < 1 || lib_->PQgetisnull(res.get(), 0, 0)) {
    throw Error(ErrorKind::ParseError, "explain returned no document");
  }
  return parse_explain_document(lib_->PQgetvalue(res.get(), 0, 0));
}

LatencyBreakdown PgConnection::run_pair(const std::string& query_id, const std::string& sql,
                                        const PlanHint& hint, double solver_ms, bool warmup) {
  if (warmup) {
    run_statement(*lib_, conn_, sql);
  }
  TimedRun baseline = explain_analyze(sql);
  TimedRun hinted = explain_analyze(prepend_hint(sql, hint));

  LatencyBreakdown breakdown;
  breakdown.query = query_id;
  breakdown.pg_planning_ms = baseline.planning_ms;
  breakdown.pg_exec_ms = baseline.execution_ms;
  breakdown.hint_planning_ms = hinted.planning_ms;
  breakdown.hint_exec_ms = hinted.execution_ms;
  breakdown.solver_ms = solver_ms;
  breakdown.hint_honored = leading_hint_honored(hint, plan_leaf_aliases(hinted.plan_text));
  return breakdown;
}

JoinGraph refresh_cardinalities(PgConnection& conn, const JoinGraph& graph) {
  std::vector<Relation> relations = graph.relations();
  for (Relation& r : relations) {
    r.cardinality = conn.fetch_cardinality(r.table_name.empty() ? r.alias : r.table_name);
  }
  std::vector<EdgeSpec> edges;
  edges.reserve(graph.edges().size());
  for (const JoinEdge& e : graph.edges()) {
    edges.emplace_back(graph.relation(e.left).alias, graph.relation(e.right).alias, e.selectivity);
  }
  return JoinGraph(graph.name(), std::move(relations), edges, graph.sql());
}

}  // namespace q2o
