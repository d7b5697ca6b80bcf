#pragma once

// Acceptance suite: one numbered criterion per line, plus a JSON artifact
// that holds every measured quantity (no timings, so reruns compare equal).

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace flatconn::selftest {

struct Criterion {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double time_limit = 0.0;  // 0 = none
};

struct SuiteReport {
  std::vector<Criterion> criteria;
  nlohmann::json artifact;

  bool passed() const;
};

// Criteria 1-8.
SuiteReport run_suite(std::uint64_t seed);

// Runs criteria 1-8 twice and appends criterion 9: byte-identical artifacts.
SuiteReport run_acceptance(std::uint64_t seed);

std::string format_line(const Criterion& c);

}  // namespace flatconn::selftest
