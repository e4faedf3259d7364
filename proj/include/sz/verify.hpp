#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sz::verify {

// One acceptance check: a named fixture battery with a hard pass/fail
// outcome at fixed tolerances, wall time, and a one-line numeric detail.
struct CheckResult {
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

struct SuiteResult {
  std::vector<CheckResult> checks;
  bool all_pass = false;
};

// Runs the full acceptance battery (currently one suite, "paper-fixtures";
// "all" is accepted as an alias). Throws std::invalid_argument on an
// unknown suite name. Checks run serially in a fixed order; every check is
// deterministic for its built-in seeds.
SuiteResult run_all(const std::string& suite = "paper-fixtures");

// One line per check ("PASS <name> (<seconds>s): <detail>") plus a summary.
void print_table(const SuiteResult& r, std::ostream& out);

}  // namespace sz::verify
