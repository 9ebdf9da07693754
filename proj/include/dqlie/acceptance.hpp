#pragma once

// The acceptance criteria as runnable checks. The acceptance binary runs them at
// full size; `dqlie check` runs them scaled down as a quick invariant suite.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace dqlie {

struct CriterionResult {
  std::string id;       // "AC1" ... "AC12"
  std::string title;
  bool passed = false;
  std::string detail;   // measured values against their thresholds
  double seconds = 0.0;
};

struct AcceptanceOptions {
  double scale = 1.0;        // multiplies every sample count; runtime limits apply only at 1
  std::uint64_t seed = 20240611;
  std::vector<std::string> only;  // run just these ids when non-empty
};

/// Runs the selected criteria in order, invoking `report` after each one.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& report = {});

std::string format_result(const CriterionResult& r);

}  // namespace dqlie
