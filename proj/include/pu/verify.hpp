#pragma once

// Randomised verification suites. Each check reports the worst residual over
// its samples against a fixed threshold; reports are deterministic in the seed.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pu/core.hpp"

namespace pu {

struct CheckResult {
  std::string id;
  std::string anchor;
  bool pass = false;
  double residual = 0.0;
  std::size_t samples = 0;
};

struct VerificationReport {
  std::uint64_t seed = 0;
  std::map<std::string, double> params;
  std::vector<CheckResult> checks;
  std::map<std::string, std::string> resolved;

  bool pass() const;
  void append(const VerificationReport& other);
};

struct VerifyConfig {
  PuParams p = PuParams::from_frequencies(2.0, 1.0);
  std::uint64_t seed = 42;
  double tol = 1e-9;  // default relative tolerance of identity checks
};

// Suite names in run order.
const std::vector<std::string>& suite_names();

// Runs one suite by name; throws InvalidInput for an unknown name.
VerificationReport run_suite(std::string_view name, const VerifyConfig& cfg);
// Runs every suite and merges the results.
VerificationReport run_verification(const VerifyConfig& cfg);

}  // namespace pu
