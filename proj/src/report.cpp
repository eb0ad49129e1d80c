#include "q2o/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include "q2o/error.hpp"

namespace q2o {
namespace {

std::string shortest(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

/// Splits one CSV record, consuming continuation lines inside quotes.
std::vector<std::string> split_csv_record(std::istream& in, std::string line, int line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  std::size_t i = 0;
  while (true) {
    if (i >= line.size()) {
      if (!quoted) break;
      std::string more;
      if (!std::getline(in, more)) {
        throw Error(ErrorKind::MalformedCsv, "line " + std::to_string(line_no) + ": unclosed quote");
      }
      cur.push_back('\n');
      line = std::move(more);
      i = 0;
      continue;
    }
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c == '\r' && i + 1 == line.size()) {
      // tolerate CRLF
    } else {
      cur.push_back(c);
    }
    ++i;
  }
  fields.push_back(std::move(cur));
  return fields;
}

double parse_cell(const std::string& cell, int line_no, const char* name) {
  if (cell.empty()) return 0.0;
  double v = 0.0;
  auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
    throw Error(ErrorKind::MalformedCsv,
                "line " + std::to_string(line_no) + ": bad " + name + " value '" + cell + "'");
  }
  return v;
}

}  // namespace

GainRow compute_gains(const LatencyBreakdown& b) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::ZeroComponent, std::string(name) + " must be positive");
    }
  };
  positive(b.pg_planning_ms, "pg_planning_ms");
  positive(b.pg_exec_ms, "pg_exec_ms");
  positive(b.hint_planning_ms, "hint_planning_ms");
  positive(b.hint_exec_ms, "hint_exec_ms");
  if (!(b.solver_ms >= 0.0) || !std::isfinite(b.solver_ms)) {
    throw Error(ErrorKind::ZeroComponent, "solver_ms must be >= 0");
  }

  GainRow g;
  g.query = b.query;
  g.exec_gain = b.pg_exec_ms / b.hint_exec_ms;
  g.e2e_gain =
      (b.pg_planning_ms + b.pg_exec_ms) / (b.hint_planning_ms + b.hint_exec_ms + b.solver_ms);
  g.reduction_pct = 100.0 * (1.0 - b.hint_exec_ms / b.pg_exec_ms);
  return g;
}

AggregateReport aggregate(const std::vector<GainRow>& rows) {
  if (rows.empty()) throw Error(ErrorKind::EmptyInput, "no gain rows to aggregate");
  AggregateReport report;
  report.total_queries = static_cast<int>(rows.size());
  double sum = 0.0;
  for (const GainRow& row : rows) {
    if (row.exec_gain > 1.0) {
      ++report.improved_count;
      report.max_reduction_pct = std::max(report.max_reduction_pct, row.reduction_pct);
      sum += row.reduction_pct;
    }
  }
  report.any_improved = report.improved_count > 0;
  if (report.any_improved) report.avg_reduction_pct = sum / report.improved_count;
  return report;
}

std::string format_aggregate(const AggregateReport& report) {
  std::string line = "queries=" + std::to_string(report.total_queries);
  line += " improved=" + std::to_string(report.improved_count);
  line += " max_reduction=" + fixed2(report.max_reduction_pct) + "%";
  line += " avg_reduction=" + fixed2(report.avg_reduction_pct) + "%";
  if (!report.any_improved) line += " (no query improved)";
  return line;
}

void write_csv(const std::vector<BenchRecord>& records, std::ostream& out) {
  out << kCsvHeader << "\n";
  for (const BenchRecord& rec : records) {
    out << csv_escape(rec.breakdown.query) << ",";
    if (rec.ok()) {
      out << shortest(rec.breakdown.pg_planning_ms) << "," << shortest(rec.breakdown.pg_exec_ms)
          << "," << shortest(rec.breakdown.hint_planning_ms) << ","
          << shortest(rec.breakdown.hint_exec_ms) << "," << shortest(rec.breakdown.solver_ms)
          << "," << (rec.breakdown.hint_honored ? "true" : "false") << ","
          << shortest(rec.gains.exec_gain) << "," << shortest(rec.gains.e2e_gain) << ","
          << shortest(rec.gains.reduction_pct) << ",";
    } else {
      out << ",,,,,false,,,,";
    }
    out << csv_escape(rec.error) << "\n";
  }
}

std::vector<BenchRecord> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorKind::MalformedCsv, "empty input");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) {
    throw Error(ErrorKind::MalformedCsv, "unexpected header: " + line);
  }

  std::vector<BenchRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    std::vector<std::string> cells = split_csv_record(in, std::move(line), line_no);
    if (cells.size() != 11) {
      throw Error(ErrorKind::MalformedCsv, "line " + std::to_string(line_no) + ": expected 11 columns, got " +
                                               std::to_string(cells.size()));
    }
    BenchRecord rec;
    rec.breakdown.query = cells[0];
    rec.gains.query = cells[0];
    rec.breakdown.pg_planning_ms = parse_cell(cells[1], line_no, "pg_planning_ms");
    rec.breakdown.pg_exec_ms = parse_cell(cells[2], line_no, "pg_exec_ms");
    rec.breakdown.hint_planning_ms = parse_cell(cells[3], line_no, "hint_planning_ms");
    rec.breakdown.hint_exec_ms = parse_cell(cells[4], line_no, "hint_exec_ms");
    rec.breakdown.solver_ms = parse_cell(cells[5], line_no, "solver_ms");
    if (cells[6] == "true" || cells[6] == "1") {
      rec.breakdown.hint_honored = true;
    } else if (cells[6] == "false" || cells[6] == "0" || cells[6].empty()) {
      rec.breakdown.hint_honored = false;
    } else {
      throw Error(ErrorKind::MalformedCsv,
                  "line " + std::to_string(line_no) + ": bad hint_honored value '" + cells[6] + "'");
    }
    rec.gains.exec_gain = parse_cell(cells[7], line_no, "exec_gain");
    rec.gains.e2e_gain = parse_cell(cells[8], line_no, "e2e_gain");
    rec.gains.reduction_pct = parse_cell(cells[9], line_no, "reduction_pct");
    rec.error = cells[10];
    records.push_back(std::move(rec));
  }
  return records;
}

void render_report_svg(const std::vector<BenchRecord>& records, std::ostream& out) {
  std::vector<const BenchRecord*> rows;
  for (const BenchRecord& rec : records) {
    if (rec.ok()) rows.push_back(&rec);
  }
  std::sort(rows.begin(), rows.end(), [](const BenchRecord* a, const BenchRecord* b) {
    if (a->gains.exec_gain != b->gains.exec_gain) return a->gains.exec_gain > b->gains.exec_gain;
    return a->breakdown.query < b->breakdown.query;
  });

  auto escape = [](const std::string& text) {
    std::string o;
    for (char c : text) {
      if (c == '&') {
        o += "&amp;";
      } else if (c == '<') {
        o += "&lt;";
      } else if (c == '>') {
        o += "&gt;";
      } else {
        o.push_back(c);
      }
    }
    return o;
  };

  const double left = 70.0, top = 46.0, bottom = 56.0, right = 20.0;
  const double bar_w = 30.0, bar_gap = 8.0, group_gap = 28.0;
  const double group_w = 2 * bar_w + bar_gap;
  const double plot_h = 260.0;
  const int n = static_cast<int>(rows.size());
  const double width = left + right + (n > 0 ? n * group_w + (n - 1) * group_gap : 200.0);
  const double height = top + plot_h + bottom;

  double max_ms = 0.0;
  for (const BenchRecord* r : rows) {
    max_ms = std::max(max_ms, std::max(r->breakdown.pg_exec_ms, r->breakdown.hint_exec_ms));
  }
  if (max_ms <= 0.0) max_ms = 1.0;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << shortest(width) << "\" height=\""
      << shortest(height) << "\" viewBox=\"0 0 " << shortest(width) << " " << shortest(height)
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << shortest(left) << "\" y=\"18\" font-size=\"13\">execution time, baseline"
         " vs hinted (ms)</text>\n";
  out << "<rect x=\"" << shortest(left + 260) << "\" y=\"8\" width=\"12\" height=\"12\" fill=\"#5b7fa6\"/>"
      << "<text x=\"" << shortest(left + 276) << "\" y=\"18\">baseline</text>\n";
  out << "<rect x=\"" << shortest(left + 340) << "\" y=\"8\" width=\"12\" height=\"12\" fill=\"#d98841\"/>"
      << "<text x=\"" << shortest(left + 356) << "\" y=\"18\">hinted</text>\n";

  for (int tick = 0; tick <= 4; ++tick) {
    double frac = tick / 4.0;
    double y = top + plot_h * (1.0 - frac);
    out << "<line x1=\"" << shortest(left) << "\" y1=\"" << shortest(y) << "\" x2=\""
        << shortest(width - right) << "\" y2=\"" << shortest(y)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << shortest(left - 6) << "\" y=\"" << shortest(y + 4)
        << "\" text-anchor=\"end\">" << fixed2(max_ms * frac) << "</text>\n";
  }

  if (n == 0) {
    out << "<text x=\"" << shortest(left) << "\" y=\"" << shortest(top + plot_h / 2)
        << "\">no successful queries</text>\n";
  }

  for (int i = 0; i < n; ++i) {
    const BenchRecord& rec = *rows[i];
    double x0 = left + i * (group_w + group_gap);
    double h_base = plot_h * rec.breakdown.pg_exec_ms / max_ms;
    double h_hint = plot_h * rec.breakdown.hint_exec_ms / max_ms;
    out << "<rect x=\"" << shortest(x0) << "\" y=\"" << shortest(top + plot_h - h_base)
        << "\" width=\"" << shortest(bar_w) << "\" height=\"" << shortest(h_base)
        << "\" fill=\"#5b7fa6\"/>\n";
    out << "<rect x=\"" << shortest(x0 + bar_w + bar_gap) << "\" y=\""
        << shortest(top + plot_h - h_hint) << "\" width=\"" << shortest(bar_w) << "\" height=\""
        << shortest(h_hint) << "\" fill=\"#d98841\"/>\n";
    out << "<text x=\"" << shortest(x0 + group_w / 2) << "\" y=\"" << shortest(top + plot_h + 16)
        << "\" text-anchor=\"middle\">" << escape(rec.breakdown.query) << "</text>\n";
    out << "<text x=\"" << shortest(x0 + group_w / 2) << "\" y=\"" << shortest(top + plot_h + 32)
        << "\" text-anchor=\"middle\" fill=\"#555555\">" << fixed2(rec.gains.exec_gain)
        << "x</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace q2o
