#pragma once

// Verification suites over a loaded scenario and their JSON-lines report.

#include <string>
#include <vector>

#include "evolint/scenario.hpp"

namespace evolint {

struct CheckRecord {
  std::string id;
  std::string suite;
  std::string tag;  // theorem tag such as "T3.1" or "P4.2"
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
  double runtime_ms = 0.0;
};

struct VerificationReport {
  std::string fingerprint;
  std::vector<CheckRecord> checks;

  bool passed() const;
};

/// Names accepted by run_suite besides "all".
const std::vector<std::string>& suite_names();

/// `selector` is "all" or a comma-separated list of suite names. "all" skips
/// the lagrangian suite for scenarios without a Lagrangian; naming it
/// explicitly for such a scenario is a SchemaError. Throws DataError when a
/// check produces a non-finite deviation.
VerificationReport run_suite(const Scenario& scenario, const std::string& selector = "all");

/// One JSON object per line, then a summary line. Timings are included only
/// on request so that repeated runs are byte-identical.
std::string to_jsonl(const VerificationReport& report, bool include_timings = false);

}  // namespace evolint
