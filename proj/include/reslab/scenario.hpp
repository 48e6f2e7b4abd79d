#ifndef RESLAB_SCENARIO_HPP
#define RESLAB_SCENARIO_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reslab/anomaly.hpp"

namespace reslab {

// One batch-runner task.  `kind` selects the operation; the remaining
// fields are interpreted per kind and echoed into the report.
struct Task {
  std::string kind;
  std::string label;
  std::string weight;
  std::vector<std::string> args;
  std::string direction;
  CoefficientConvention conv = CoefficientConvention::kExact;
  std::string t_rational = "1/2";  // family parameter, exact
  double t = 0.7;                  // heat parameter
  double u = 1.0;                  // duhamel parameter
  std::vector<double> t_grid;
  int depth = 0;
  int nodes = 8;
  long radius = 24;
  int quad_nodes = 64;
  std::string criterion_id;  // kind == "criterion"
  std::optional<double> expected_re;
  std::optional<double> expected_im;
  std::optional<double> tolerance;
};

struct Scenario {
  int dim = 1;
  int rank = 1;
  std::map<std::string, Weight> weights;
  std::map<std::string, ClassicalSymbol> operators;
  std::vector<Task> tasks;
};

Scenario parse_scenario_json(const std::string& text);
Scenario parse_scenario_file(const std::string& path);
std::string scenario_to_json(const Scenario& s);

struct TaskResult {
  size_t index = 0;
  std::string kind;
  std::string label;
  std::string inputs_json;  // echo of the task record
  std::complex<double> value{0.0, 0.0};
  double err = 0.0;
  std::optional<std::string> exact;  // rational string when available
  std::optional<std::complex<double>> pole;
  std::string detail;
  std::optional<double> deviation;
  std::optional<bool> pass;
  std::optional<std::string> error;  // task-level failure
  double time_ms = 0.0;
  std::vector<TermRecord> terms;
};

struct Report {
  std::vector<TaskResult> tasks;
  int passed = 0;
  int failed = 0;
  int errors = 0;
};

struct RunOptions {
  int threads = 0;        // 0: RES_LAB_THREADS or hardware
  bool with_terms = false;
  double tol_scale = 1.0;
};

Report run_scenario(const Scenario& s, const RunOptions& opts = {});

std::string report_to_json(const Report& r, bool include_timing = true);
std::string report_to_csv(const Report& r);

int default_thread_count();

// The spectral-oracle weighted trace as a trace provider for the weight's
// diagonal model; throws when the weight carries no eigenvalue law.
TraceProvider oracle_trace_provider(const Weight& q, long radius = 40);

}  // namespace reslab

#endif
