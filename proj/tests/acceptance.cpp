// Acceptance runner: one line per criterion, nonzero exit if any fails.
// With arguments, runs only the listed criterion ids.
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <vector>

#include "necrotic/verify.hpp"

int main(int argc, char** argv) {
  using namespace necrotic;
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    char* end = nullptr;
    const long id = std::strtol(argv[i], &end, 10);
    if (*end != '\0' || id < 1 || id > kCriterionCount) {
      std::fprintf(stderr, "usage: %s [criterion 1..%d ...]\n", argv[0], kCriterionCount);
      return 2;
    }
    ids.push_back(static_cast<int>(id));
  }
  if (ids.empty()) {
    for (int id = 1; id <= kCriterionCount; ++id) ids.push_back(id);
  }

  int failed = 0;
  for (int id : ids) {
    CheckResult r;
    try {
      r = run_criterion(id);
    } catch (const std::exception& e) {
      r.id = id;
      r.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %d %s  %-28s %7.2fs / %5.0fs  %s\n", r.id, r.passed ? "PASS" : "FAIL",
                r.name.c_str(), r.seconds, r.budget_seconds, r.detail.c_str());
    for (const auto& [key, value] : r.metrics) std::printf("    %-40s %.12g\n", key.c_str(), value);
    std::fflush(stdout);
    if (!r.passed) ++failed;
  }
  std::printf("%zu criteria, %d failed\n", ids.size(), failed);
  return failed == 0 ? 0 : 1;
}
