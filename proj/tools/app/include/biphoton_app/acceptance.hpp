#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <biphoton/circuit.hpp>

namespace biphoton::app {

struct AcceptanceOptions {
  std::uint64_t seed = 20240601;
  double tau_thermal_us = 10.0;
  BsConvention convention = BsConvention::Symmetric;
  unsigned workers = 0;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string measured;
  double seconds = 0.0;
};

inline constexpr int kCriterionCount = 10;

/// Runs one criterion (1..10).
CriterionResult run_criterion(int id, const AcceptanceOptions& options);
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

/// "PASS  criterion 3  <title>: <measured> [1.23 s]"
std::string format_result(const CriterionResult& r);

}  // namespace biphoton::app
