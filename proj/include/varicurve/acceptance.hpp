#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace varicurve {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 7;
  unsigned threads = 1;
};

inline constexpr int kCriterionCount = 12;

/// Runs criterion `id` (1 to 12). Library errors raised while running are
/// reported as a failed result rather than propagated.
CriterionResult run_criterion(int id, const AcceptanceOptions& opts = {});

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, const AcceptanceOptions& opts = {});

/// "[PASS] 5 crossing average: measured=... threshold=... (detail)"
std::string format_result(const CriterionResult& r);

/// The individual property checks behind criterion 12.
struct PropertyResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;      // largest observed deviation
  double tolerance = 0.0;
};

std::vector<PropertyResult> run_property_suite(std::uint64_t seed);

}  // namespace varicurve
