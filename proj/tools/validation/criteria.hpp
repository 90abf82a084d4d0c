#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace spdekit::validation {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Report {
  int criterion = 0;
  std::string title;
  std::vector<Check> checks;

  bool passed() const;
};

struct Suite {
  std::string name;
  int criterion = 0;
  std::string title;
  std::function<Report()> run;
};

Report matern_2d();
Report neumann_1d();
Report sparse_vs_dense();
Report selected_inverse_accuracy();
Report ar1_kronecker();
Report sphere_series();
Report fractional_exponential();
Report hyperparameter_recovery();
Report lgcp_checks();
Report type_g_limit();

// Criteria 1..10 in order.
const std::vector<Suite>& suites();

// Runs the suite; an exception becomes a single failed check.
Report run_suite(const Suite& suite);

// One "PASS"/"FAIL" line per check followed by a summary line.
std::string format_report(const Report& report);

}  // namespace spdekit::validation
