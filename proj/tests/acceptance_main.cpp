// Runs the eight acceptance suites at the reference seed and prints one
// line per criterion; exits nonzero if any fails.

#include <cstdio>

#include "flowembed/golden.hpp"
#include "flowembed/verify.hpp"

int main() {
  using namespace flowembed;
  int failures = 0;
  for (int i = 1; i <= 8; ++i) {
    CriterionResult r;
    try {
      r = verify_all(kGoldenSeed, {i}).front();
    } catch (const std::exception& e) {
      std::printf("criterion %d ERROR: %s\n", i, e.what());
      ++failures;
      continue;
    }
    std::printf("criterion %d %-14s %s  (%.2fs)\n", r.index, r.name.c_str(),
                r.pass ? "pass" : "FAIL", r.seconds);
    if (!r.pass) {
      ++failures;
      std::printf("%s\n", r.details.dump(2).c_str());
    }
  }
  return failures == 0 ? 0 : 1;
}
