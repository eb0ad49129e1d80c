#pragma once

#include <optional>
#include <string>
#include <vector>

#include "q2o/hints.hpp"
#include "q2o/joingraph.hpp"

namespace q2o {

struct ConnectionSettings {
  std::string host = "localhost";
  int port = 5432;
  std::string database = "postgres";
  std::string user = "postgres";
  std::string password;  // empty relies on ambient auth (pgpass, trust, peer)
  int statement_timeout_ms = 300000;

  /// Reads Q2O_PG_HOST, Q2O_PG_PORT, Q2O_PG_DB, Q2O_PG_USER, Q2O_PG_PASSWORD.
  /// Unset variables keep their defaults; nullopt when none is set at all.
  static std::optional<ConnectionSettings> from_env();

  /// key=value connection string with proper quoting.
  std::string conninfo() const;
};

struct TimedRun {
  double planning_ms = 0.0;
  double execution_ms = 0.0;
  std::string plan_text;  // raw EXPLAIN document, kept for audit
};

struct LatencyBreakdown {
  std::string query;
  double pg_planning_ms = 0.0;
  double pg_exec_ms = 0.0;
  double hint_planning_ms = 0.0;
  double hint_exec_ms = 0.0;
  double solver_ms = 0.0;
  bool hint_honored = false;
};

/// Extracts "Planning Time" and "Execution Time" (ms) from an
/// EXPLAIN (ANALYZE, FORMAT JSON) document. Throws ParseError when either
/// field is missing, malformed, or negative.
TimedRun parse_explain_document(const std::string& json_text);

/// Left-to-right base-relation aliases of the document's plan tree. A node
/// carrying an Alias (or Relation Name) is a scan; its children are access
/// machinery, not joins, and are not descended into.
std::vector<std::string> plan_leaf_aliases(const std::string& json_text);

/// pg_class.reltuples is -1 before the first analyze; anything below one row
/// becomes one row so downstream logarithms stay finite.
double clamp_cardinality(double reltuples);

/// True when the executed plan joins relations in exactly the hinted order.
bool leading_hint_honored(const PlanHint& hint, const std::vector<std::string>& plan_leaves);

struct LibPq;

/// One live server connection; owned by a single caller at a time.
class PgConnection {
 public:
  explicit PgConnection(const ConnectionSettings& settings);
  ~PgConnection();
  PgConnection(const PgConnection&) = delete;
  PgConnection& operator=(const PgConnection&) = delete;

  /// Runs a statement for effect, discarding any result rows.
  void execute(const std::string& sql);

  /// Planner row estimate for a table, clamped to >= 1.
  double fetch_cardinality(const std::string& table_name);

  /// Runs EXPLAIN (ANALYZE, FORMAT JSON) around the statement.
  TimedRun explain_analyze(const std::string& sql);

  /// Baseline then hinted measurement; optional discarded warm-up execution
  /// first. Exactly two EXPLAIN statements per call, baseline always first.
  LatencyBreakdown run_pair(const std::string& query_id, const std::string& sql,
                            const PlanHint& hint, double solver_ms, bool warmup = true);

 private:
  const LibPq* lib_ = nullptr;
  void* conn_ = nullptr;
};

/// New graph with every cardinality replaced by the live catalog estimate
/// (table name when present, alias otherwise).
JoinGraph refresh_cardinalities(PgConnection& conn, const JoinGraph& graph);

}  // namespace q2o
