#pragma once

// Deterministic invariant suite behind `vecbal verify`.

#include <cstdint>
#include <string>
#include <vector>

namespace vecbal {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  std::string goldenDir = VECBAL_GOLDEN_DIR;
  std::uint64_t masterSeed = 1;
  std::int64_t conservationSteps = 1'000'000;
  std::int64_t innerProductSteps = 100'000;
  std::int64_t greedySteps = 1'000'000;
  std::int64_t equivalenceSteps = 100'000;
};

/// Golden trajectory files inside goldenDir.
inline constexpr const char* kGoldenConfigFile = "golden_config.json";
inline constexpr const char* kGoldenRecordsFile = "golden_records.csv";

std::vector<CheckResult> runInvariantSuite(const VerifyOptions& options = {});

} // namespace vecbal
