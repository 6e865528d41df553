// Acceptance gate: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exit status 0 iff all pass.

#include <cstdio>
#include <cstring>

#include "hlsv/acceptance.hpp"

int main(int argc, char** argv) {
  hlsv::AcceptanceOptions opt;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) opt.quick = true;
  }
  auto results = hlsv::run_acceptance(opt);
  bool all = true;
  for (const auto& r : results) {
    std::puts(hlsv::format_criterion(r).c_str());
    all = all && r.pass;
  }
  std::printf("%s\n", all ? "ACCEPTANCE: all criteria passed"
                          : "ACCEPTANCE: FAILURES present");
  return all ? 0 : 1;
}
