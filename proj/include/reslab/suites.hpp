#ifndef RESLAB_SUITES_HPP
#define RESLAB_SUITES_HPP

#include <string>
#include <vector>

namespace reslab {

struct CriterionResult {
  std::string id;
  std::string summary;
  bool pass = false;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::string detail;
  double seconds = 0.0;
};

// Registered verification suites; each bundles named criteria.
std::vector<std::string> list_suites();
std::vector<std::string> suite_criteria(const std::string& suite);

CriterionResult run_criterion(const std::string& id, double tol_scale = 1.0);
std::vector<CriterionResult> run_suite(const std::string& suite,
                                       double tol_scale = 1.0);

std::string criteria_summary_json(const std::vector<CriterionResult>& results);

}  // namespace reslab

#endif
