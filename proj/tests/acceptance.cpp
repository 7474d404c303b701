// Runs every acceptance criterion at the full level and prints one line each.
// Exit status is nonzero if any criterion fails.

#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "transit/selftest.hpp"

int main(int argc, char** argv) {
  transit::SelftestOptions opts;
  opts.level = transit::SelftestLevel::full;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) opts.level = transit::SelftestLevel::quick;
    if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) opts.seed = std::strtoull(argv[++i], nullptr, 10);
  }
  int failed = 0;
  transit::run_selftest(opts, [&failed](const transit::CriterionReport& r) {
    std::printf("%s\n", r.line().c_str());
    std::fflush(stdout);
    if (!r.pass) ++failed;
  });
  std::printf("%s: %d criteria failed\n", failed == 0 ? "ALL PASS" : "FAILURES", failed);
  return failed == 0 ? 0 : 1;
}
