#pragma once

#include <string>
#include <vector>

#include "kappa/grid.hpp"

namespace kappa::suites {

// One verified property. `relation` is "<=" for defect bounds and ">=" for
// convergence-order ratios; `pass` applies it to residual vs tolerance.
struct CheckResult {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string relation = "<=";
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;

  bool pass() const {
    for (const CheckResult& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

struct SuiteConfig {
  double kappa = 1.0;
  GridSpec spec;
  bool strict = false;
  double tol_symbolic = 1e-10;
  double tol_grid = 1e-4;
  unsigned seed = 2026;
};

// name in {symbolic, hopf, calculus, grid, trace, rieffel}; throws
// ConfigError on anything else ("all" is expanded by the caller).
SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg);

const std::vector<std::string>& suite_names();

// Reports serialized deterministically (no timing fields): identical config
// and seed give byte-identical output.
std::string to_json(const std::vector<SuiteReport>& reports,
                    const SuiteConfig& cfg);
std::string to_csv(const std::vector<SuiteReport>& reports);

}  // namespace kappa::suites
