#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "reslab.h"
#include "reslab/errors.hpp"
#include "reslab/scenario.hpp"
#include "reslab/suites.hpp"

using namespace reslab;

namespace {

const char* kTinyScenario = R"({
  "testbed": {"dim": 1, "rank": 1},
  "weights": {
    "Q": {"order": 2, "eigenvalue_law": [1, 0, 1]}
  },
  "operators": {
    "absD":  [{"degree": 1, "plus": [[0, 1, 1, 0, 1]], "minus": [[0, 1, 1, 0, 1]]}],
    "shift": [{"degree": 0, "plus": [[1, 1, 1, 0, 1]], "minus": [[1, 1, 1, 0, 1]]}],
    "truncD": [{"degree": -1, "plus": [[0, 1, 1, 0, 1]], "minus": [[0, 1, 1, 0, 1]]}]
  },
  "tasks": [
    {"kind": "wodzicki_residue", "args": ["truncD"], "expected": 2.0, "tolerance": 1e-12},
    {"kind": "weighted_trace", "weight": "Q", "args": ["absD"], "expected": -1.1666666667, "tolerance": 1e-8},
    {"kind": "mellin_residue", "weight": "Q", "args": ["truncD"], "expected": 1.0, "tolerance": 1e-12},
    {"kind": "duhamel_check", "weight": "Q", "args": ["shift"], "u": 0.3, "radius": 16,
     "expected": 0.0, "tolerance": 1e-9}
  ]
})";

}  // namespace

TEST_CASE("scenario parsing, execution, pass/fail accounting") {
  Scenario s = parse_scenario_json(kTinyScenario);
  CHECK(s.operators.size() == 3);
  CHECK(s.weights.count("Q") == 1);
  CHECK(s.tasks.size() == 4);

  RunOptions opts;
  opts.threads = 1;
  Report rep = run_scenario(s, opts);
  CHECK(rep.errors == 0);
  CHECK(rep.failed == 0);
  CHECK(rep.passed == 4);
  CHECK(rep.tasks[0].exact.value() == "2");
}

TEST_CASE("empty scenario produces an empty passing report") {
  Scenario s = parse_scenario_json(R"({"tasks": []})");
  Report rep = run_scenario(s);
  CHECK(rep.tasks.empty());
  CHECK(rep.failed == 0);
  CHECK(rep.errors == 0);
}

TEST_CASE("unknown task kind raises ParseError") {
  CHECK_THROWS_AS(
      parse_scenario_json(R"({"tasks": [{"kind": "frobnicate"}]})"),
      ParseError);
}

TEST_CASE("unknown names raise ResolutionError") {
  CHECK_THROWS_AS(parse_scenario_json(
                      R"({"tasks": [{"kind": "wodzicki_residue", "args": ["nope"]}]})"),
                  ResolutionError);
}

TEST_CASE("scenario round-trip: serialize then re-parse") {
  Scenario s = parse_scenario_json(kTinyScenario);
  std::string one = scenario_to_json(s);
  Scenario s2 = parse_scenario_json(one);
  std::string two = scenario_to_json(s2);
  CHECK(one == two);
  CHECK(s2.operators.size() == s.operators.size());
  CHECK(s2.tasks.size() == s.tasks.size());
}

TEST_CASE("report determinism across thread counts (modulo timing)") {
  Scenario s = parse_scenario_json(kTinyScenario);
  RunOptions serial;
  serial.threads = 1;
  RunOptions parallel;
  parallel.threads = 4;
  std::string a = report_to_json(run_scenario(s, serial), false);
  std::string b = report_to_json(run_scenario(s, parallel), false);
  CHECK(a == b);
}

TEST_CASE("task-level errors are recorded without aborting the run") {
  const char* text = R"({
    "weights": {"Q": {"order": 2, "eigenvalue_law": [1, 0, 1]}},
    "operators": {"A": [{"degree": 1, "plus": [[0,1,1,0,1]], "minus": [[0,1,1,0,1]]}]},
    "tasks": [
      {"kind": "heat_trace", "weight": "Q", "args": ["A"], "t": "-1"},
      {"kind": "wodzicki_residue", "args": ["A"], "expected": 0.0, "tolerance": 1e-12}
    ]
  })";
  Report rep = run_scenario(parse_scenario_json(text));
  CHECK(rep.errors == 1);
  CHECK(rep.tasks[0].error.has_value());
  CHECK(rep.passed == 1);
}

TEST_CASE("suite registry") {
  CHECK_THROWS_AS(suite_criteria("misspelled"), ResolutionError);
  auto ids = suite_criteria("exact-residue");
  REQUIRE(ids.size() == 2);
  CHECK(ids[0] == "A-1");
  auto all = suite_criteria("paper-core");
  CHECK(all.size() == 16);
}

TEST_CASE("C API: evaluate a scenario end to end") {
  reslab_session* session = reslab_session_new();
  reslab_session_set_threads(session, 2);
  char* report = nullptr;
  int status = reslab_eval_json(session, kTinyScenario, &report);
  REQUIRE(report != nullptr);
  std::string text(report);
  CHECK(status == RESLAB_OK);
  CHECK(text.find("\"failed\": 0") != std::string::npos);

  char* csv = nullptr;
  CHECK(reslab_report_csv(session, report, &csv) == RESLAB_OK);
  REQUIRE(csv != nullptr);
  CHECK(std::string(csv).find("wodzicki_residue") != std::string::npos);
  reslab_free(csv);
  reslab_free(report);

  char* names = nullptr;
  CHECK(reslab_list_suites(session, &names) == RESLAB_OK);
  CHECK(std::string(names).find("paper-core") != std::string::npos);
  reslab_free(names);

  char* bad = nullptr;
  int parse_status = reslab_eval_json(session, "{not json", &bad);
  CHECK(parse_status == RESLAB_E_PARSE);
  CHECK(std::string(reslab_last_error(session)).find("JSON") !=
        std::string::npos);
  reslab_session_free(session);
}

TEST_CASE("criterion task kind bridges into the suites") {
  const char* text = R"({"tasks": [{"kind": "criterion", "id": "B-5"}]})";
  Report rep = run_scenario(parse_scenario_json(text));
  REQUIRE(rep.tasks.size() == 1);
  CHECK(rep.tasks[0].pass.value());
}
