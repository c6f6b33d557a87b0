#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace steklov {

struct CheckResult {
  std::string name;
  /// Human-readable acceptance rule, e.g. "rel err < 0.01".
  std::string rule;
  double measured = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

struct ValidateOptions {
  /// Also run the trichotomy sweeps and solver path equivalence (minutes).
  bool strict = false;
  /// Replace the h = 1/64 strip mesh by a 4x4 mesh; the strip check must fail.
  bool coarse_oracle = false;
};

/// Oracle suites (strip, disk), assembly identities, Jacobian certificates,
/// minimax and orthogonality checks. Each check reports its rule, measured
/// value and verdict; exceptions inside a check become failed entries.
std::vector<CheckResult> run_validate(const ValidateOptions& options = {});

bool all_passed(const std::vector<CheckResult>& results);
void print_report(const std::vector<CheckResult>& results, std::ostream& out);
/// JSON array of {name, rule, measured, threshold, pass, detail}.
std::string report_json(const std::vector<CheckResult>& results);

}  // namespace steklov
