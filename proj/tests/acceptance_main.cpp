#include "varicurve/acceptance.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

int main(int argc, char** argv) {
  varicurve::AcceptanceOptions opts;
  std::vector<int> ids;
  for (int k = 1; k < argc; ++k) ids.push_back(std::atoi(argv[k]));
  if (ids.empty()) {
    for (int id = 1; id <= varicurve::kCriterionCount; ++id) ids.push_back(id);
  }
  int failures = 0;
  for (int id : ids) {
    const varicurve::CriterionResult r = varicurve::run_criterion(id, opts);
    std::printf("%s\n", varicurve::format_result(r).c_str());
    std::fflush(stdout);
    if (!r.passed) ++failures;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(ids.size()) - failures, ids.size());
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
