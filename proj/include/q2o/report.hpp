#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "q2o/pgclient.hpp"

namespace q2o {

struct GainRow {
  std::string query;
  double exec_gain = 0.0;      // baseline execution / hinted execution
  double e2e_gain = 0.0;       // baseline plan+exec / hinted plan+exec+solver
  double reduction_pct = 0.0;  // 100 * (1 - hinted exec / baseline exec)
};

/// Requires the four planning/execution components to be positive and
/// solver_ms to be non-negative; throws ZeroComponent otherwise.
GainRow compute_gains(const LatencyBreakdown& breakdown);

struct AggregateReport {
  int total_queries = 0;
  int improved_count = 0;  // rows with exec_gain > 1
  bool any_improved = false;
  double max_reduction_pct = 0.0;  // over improved rows; 0 when none improved
  double avg_reduction_pct = 0.0;
};

AggregateReport aggregate(const std::vector<GainRow>& rows);

/// One-line summary with percentages rounded to 2 decimals.
std::string format_aggregate(const AggregateReport& report);

/// One benchmark outcome: measured components plus derived gains, or an
/// error message when the query could not be measured.
struct BenchRecord {
  LatencyBreakdown breakdown;
  GainRow gains;
  std::string error;
  bool ok() const { return error.empty(); }
};

inline constexpr char kCsvHeader[] =
    "query,pg_planning_ms,pg_exec_ms,hint_planning_ms,hint_exec_ms,solver_ms,"
    "hint_honored,exec_gain,e2e_gain,reduction_pct,error";

/// Full-precision CSV; failed rows leave the numeric cells empty and carry
/// the message in the error column.
void write_csv(const std::vector<BenchRecord>& records, std::ostream& out);

/// Inverse of write_csv; throws MalformedCsv on any deviation.
std::vector<BenchRecord> parse_csv(std::istream& in);

/// Grouped-bar chart (baseline vs hinted execution ms per query), groups
/// sorted by exec_gain descending with query id as tie-break. Deterministic
/// bytes for identical input.
void render_report_svg(const std::vector<BenchRecord>& records, std::ostream& out);

}  // namespace q2o
