// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <cstdlib>
#include <iostream>
#include <string>

#include "hqe/selftest/all.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = hqe::selftest::kDefaultSeed;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
  bool ok = true;
  double total = 0;
  for (const auto& s : hqe::selftest::suites()) {
    hqe::selftest::Report r = s.run(seed);
    ok = ok && r.pass();
    total += r.seconds;
    std::cout << hqe::selftest::summary_line(r) << "\n";
    for (const auto& n : r.notes) std::cout << "      " << n << "\n";
    std::cout.flush();
  }
  std::cout << "total " << total << " s (target 120 s)\n";
  return ok && total <= 120 ? 0 : 1;
}
