#pragma once

// Property suites shared by the acceptance binary and the selftest verb.
// Each suite returns a deterministic JSON report; timings are kept apart so
// reruns can be compared byte for byte.

#include "zplat/json_io.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace zplat {

struct SuiteConfig {
  std::uint64_t seed = 0;
  int recognition_cases = 100;  // per group
  int weiss_cases = 100;        // per group, for each Weiss form
  int hnn_cases = 50;           // per group
  int max_rank = 48;
  unsigned threads = 0;  // 0 = hardware concurrency
  bool progress = false;  // summary line on stderr as each suite ends
};

struct SuiteResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double seconds = 0;
  double limit_seconds = 0;  // 0 = no limit
  std::string detail;        // first failure, if any
  Json report;
};

/// Suites 1 to 8 in order, then 9, which reruns 1 to 8 and compares reports.
std::vector<SuiteResult> run_suites(const SuiteConfig& cfg);

/// One line per suite: "PASS 2 recognition: 800/800 cases in 12.3 s (limit 60 s)".
std::string summary_line(const SuiteResult& r);

}  // namespace zplat
