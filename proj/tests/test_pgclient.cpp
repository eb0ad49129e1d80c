#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "q2o/pgclient.hpp"

using namespace q2o;

namespace {

const char* kExplainDoc = R"([
  {
    "Plan": {
      "Node Type": "Aggregate",
      "Plans": [
        {
          "Node Type": "Hash Join",
          "Plans": [
            {
              "Node Type": "Nested Loop",
              "Plans": [
                {"Node Type": "Seq Scan", "Relation Name": "title", "Alias": "t"},
                {
                  "Node Type": "Bitmap Heap Scan",
                  "Relation Name": "movie_companies",
                  "Alias": "mc",
                  "Plans": [
                    {"Node Type": "Bitmap Index Scan", "Index Name": "mc_idx"}
                  ]
                }
              ]
            },
            {"Node Type": "Seq Scan", "Relation Name": "company_name", "Alias": "cn"}
          ]
        }
      ]
    },
    "Planning Time": 1.00,
    "Execution Time": 3581.40
  }
])";

struct EnvGuard {
  std::vector<std::pair<std::string, std::string>> saved;
  explicit EnvGuard(std::initializer_list<const char*> names) {
    for (const char* name : names) {
      const char* value = std::getenv(name);
      saved.emplace_back(name, value ? value : "\x01unset");
      unsetenv(name);
    }
  }
  ~EnvGuard() {
    for (const auto& [name, value] : saved) {
      if (value == "\x01unset") {
        unsetenv(name.c_str());
      } else {
        setenv(name.c_str(), value.c_str(), 1);
      }
    }
  }
};

}  // namespace

TEST_CASE("parse_explain_document extracts the timing fields") {
  TimedRun run = parse_explain_document(kExplainDoc);
  CHECK(run.planning_ms == 1.00);
  CHECK(run.execution_ms == 3581.40);
  CHECK_FALSE(run.plan_text.empty());
}

TEST_CASE("parse_explain_document accepts a bare object document") {
  TimedRun run = parse_explain_document(
      R"({"Plan": {"Node Type": "Seq Scan", "Alias": "x"},
          "Planning Time": 0.5, "Execution Time": 2.25})");
  CHECK(run.planning_ms == 0.5);
  CHECK(run.execution_ms == 2.25);
}

TEST_CASE("parse_explain_document rejects malformed documents") {
  CHECK_THROWS_WITH_AS(parse_explain_document("not json"),
                       doctest::Contains("ParseError"), Error);
  CHECK_THROWS_AS(parse_explain_document("[]"), Error);
  CHECK_THROWS_AS(parse_explain_document(R"([{"Planning Time": 1.0}])"), Error);
  CHECK_THROWS_AS(parse_explain_document(R"([{"Execution Time": 1.0}])"), Error);
  CHECK_THROWS_AS(
      parse_explain_document(R"([{"Planning Time": -1.0, "Execution Time": 1.0}])"),
      Error);
  CHECK_THROWS_AS(
      parse_explain_document(R"([{"Planning Time": "fast", "Execution Time": 1.0}])"),
      Error);
}

TEST_CASE("plan_leaf_aliases walks scans left to right") {
  CHECK(plan_leaf_aliases(kExplainDoc) == std::vector<std::string>{"t", "mc", "cn"});

  // scan without an Alias falls back to the relation name
  CHECK(plan_leaf_aliases(
            R"({"Plan": {"Node Type": "Seq Scan", "Relation Name": "title"}})") ==
        std::vector<std::string>{"title"});

  CHECK_THROWS_WITH_AS(plan_leaf_aliases(R"({"no_plan": 1})"),
                       doctest::Contains("ParseError"), Error);
}

TEST_CASE("clamp_cardinality") {
  CHECK(clamp_cardinality(36244344.0) == 36244344.0);
  CHECK(clamp_cardinality(-1.0) == 1.0);  // pre-analyze sentinel
  CHECK(clamp_cardinality(0.0) == 1.0);
  CHECK(clamp_cardinality(0.25) == 1.0);
  CHECK(clamp_cardinality(std::nan("")) == 1.0);
}

TEST_CASE("leading_hint_honored compares leaf sequences") {
  PlanHint hint = emit_leading_hint(order_to_tree({"t", "mc", "cn"}));
  CHECK(leading_hint_honored(hint, {"t", "mc", "cn"}));
  CHECK_FALSE(leading_hint_honored(hint, {"mc", "t", "cn"}));
  CHECK_FALSE(leading_hint_honored(hint, {"t", "mc"}));
  CHECK_FALSE(leading_hint_honored(hint, {"t", "mc", "cn", "k"}));
}

TEST_CASE("connection settings from the environment") {
  EnvGuard guard{"Q2O_PG_HOST", "Q2O_PG_PORT", "Q2O_PG_DB", "Q2O_PG_USER",
                 "Q2O_PG_PASSWORD"};

  CHECK_FALSE(ConnectionSettings::from_env().has_value());

  setenv("Q2O_PG_HOST", "db.internal", 1);
  auto settings = ConnectionSettings::from_env();
  REQUIRE(settings.has_value());
  CHECK(settings->host == "db.internal");
  CHECK(settings->port == 5432);
  CHECK(settings->database == "postgres");
  CHECK(settings->user == "postgres");
  CHECK(settings->password.empty());
  CHECK(settings->statement_timeout_ms == 300000);

  setenv("Q2O_PG_PORT", "6543", 1);
  setenv("Q2O_PG_DB", "imdb", 1);
  setenv("Q2O_PG_USER", "bench", 1);
  setenv("Q2O_PG_PASSWORD", "s3cret", 1);
  settings = ConnectionSettings::from_env();
  REQUIRE(settings.has_value());
  CHECK(settings->port == 6543);
  CHECK(settings->database == "imdb");
  CHECK(settings->user == "bench");
  CHECK(settings->password == "s3cret");

  setenv("Q2O_PG_PORT", "not-a-port", 1);
  CHECK_THROWS_WITH_AS(ConnectionSettings::from_env(),
                       doctest::Contains("ConfigError"), Error);
}

TEST_CASE("conninfo quoting") {
  ConnectionSettings s;
  s.host = "localhost";
  s.port = 5432;
  s.database = "post gres";
  s.user = "it's";
  std::string info = s.conninfo();
  CHECK(info.find("host='localhost'") != std::string::npos);
  CHECK(info.find("port=5432") != std::string::npos);
  CHECK(info.find("dbname='post gres'") != std::string::npos);
  CHECK(info.find("user='it\\'s'") != std::string::npos);
  CHECK(info.find("connect_timeout=10") != std::string::npos);
  CHECK(info.find("password") == std::string::npos);

  s.password = "p";
  CHECK(s.conninfo().find("password='p'") != std::string::npos);
}

TEST_CASE("connecting to a dead server reports ConnectionError") {
  ConnectionSettings s;
  s.host = "127.0.0.1";
  s.port = 1;  // nothing listens there
  CHECK_THROWS_WITH_AS(PgConnection conn(s), doctest::Contains("ConnectionError"), Error);
}
