#pragma once

#include <chrono>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "hqe/errors.hpp"

namespace hqe::selftest {

/// Outcome of one acceptance suite.
struct Report {
  int id = 0;
  std::string name;
  double budget_seconds = 0;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::vector<std::string> notes;  // first few failures, then summary facts
  double seconds = 0;

  void check(bool ok, const std::string& what) {
    ++cases;
    if (ok) return;
    ++failures;
    if (notes.size() < 8) notes.push_back(what);
  }
  void note(const std::string& s) { notes.push_back(s); }
  bool in_time() const { return seconds <= budget_seconds; }
  bool pass() const { return cases > 0 && failures == 0 && in_time(); }
};

/// Runs `body` on a fresh report and times it. An escaping exception counts
/// as a failure.
inline Report run_timed(int id, const std::string& name, double budget, const std::function<void(Report&)>& body) {
  Report r;
  r.id = id;
  r.name = name;
  r.budget_seconds = budget;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    ++r.failures;
    r.notes.push_back(std::string("aborted: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline std::string summary_line(const Report& r) {
  std::ostringstream os;
  os << (r.pass() ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.name << ": " << r.cases << " checks, "
     << r.failures << " failures, " << std::fixed;
  os.precision(2);
  os << r.seconds << " s (budget " << r.budget_seconds << " s)";
  return os.str();
}

}  // namespace hqe::selftest
