#pragma once

#include <string>
#include <vector>

#include "hqe/selftest/suites_decomp.hpp"
#include "hqe/selftest/suites_hensel.hpp"
#include "hqe/selftest/suites_logic.hpp"
#include "hqe/selftest/suites_rv.hpp"

namespace hqe::selftest {

inline constexpr std::uint64_t kDefaultSeed = 1;

struct Suite {
  int id;
  std::string key;  // name accepted by `selftest --suite`
  Report (*run)(std::uint64_t);
};

inline const std::vector<Suite>& suites() {
  static const std::vector<Suite> all = {
      {1, "rv", suite_rv_equivalence},   {2, "oplus", suite_partial_addition}, {3, "hensel", suite_hensel},
      {4, "collision", suite_collision}, {5, "decompose", suite_decomposition}, {6, "linear", suite_linear},
      {7, "qe", suite_qe},               {8, "normal-form", suite_normal_form},
  };
  return all;
}

/// Runs the suite with the given key or number, or every suite for "all".
inline std::vector<Report> run_suites(const std::string& which, std::uint64_t seed) {
  std::vector<Report> out;
  for (const auto& s : suites()) {
    if (which == "all" || which == s.key || which == std::to_string(s.id)) out.push_back(s.run(seed));
  }
  if (out.empty()) throw PreconditionViolated("unknown suite " + which);
  return out;
}

}  // namespace hqe::selftest
