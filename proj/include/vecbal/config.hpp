#pragma once

// Experiment configuration (JSON) and the result file formats.
//
// Bin indices are 1-based in every file format and 0-based in the library.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vecbal/analysis.hpp"
#include "vecbal/engine.hpp"

namespace vecbal {

struct CheckpointSpec {
  std::int64_t tMin = 10;
  std::optional<std::int64_t> tMax; // defaults to each T
  double ratio = 10.0;
  friend bool operator==(const CheckpointSpec&, const CheckpointSpec&) = default;
};

struct OutputPaths {
  std::string records;    // CSV; empty = stdout
  std::string summary;    // JSON
  std::string omegaTable; // CSV
  friend bool operator==(const OutputPaths&, const OutputPaths&) = default;
};

struct DriftSpec {
  BinPair pair{0, 1};
  std::vector<Bucket> buckets;
  std::int64_t burnIn = -1;
  std::int64_t nSteps = 100000;
  std::optional<Eigen::MatrixXd> initialSums; // d x k
  bool restartOnExit = false;
};
bool operator==(const DriftSpec& a, const DriftSpec& b);

/// A TrialConfig template plus sweep axes. Every axis with more than one
/// value multiplies the grid; each grid point runs `trials` trials.
struct ExperimentConfig {
  std::vector<int> d{2};
  std::vector<int> k{2};
  std::vector<std::int64_t> T{1000};
  std::vector<StrategyKind> strategy{StrategyKind::InnerProduct};
  std::vector<DistributionSpec> distribution{UniformBall{}};
  CheckpointSpec checkpoints;
  std::uint64_t masterSeed = 1;
  int trials = 1;
  int parallelism = 1;
  OutputPaths output;
  std::vector<double> quantiles{0.1, 0.5, 0.9};
  std::optional<DriftSpec> drift;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Strict parse: unknown keys are fatal. Throws ParseError (syntax, with
/// line/column) or ValidationError (semantics, naming the field).
ExperimentConfig parseConfig(std::string_view text);
ExperimentConfig loadConfig(const std::string& path);

/// JSON text that parseConfig maps back to an equal config.
std::string serializeConfig(const ExperimentConfig& config);

struct TrialGroup {
  TrialConfig base; // trialIndex 0
  std::vector<TrialConfig> trials;
};

/// Cartesian product of the axes in the order d, k, T, strategy,
/// distribution (outermost first); every expanded config is validated.
std::vector<TrialGroup> expandGroups(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// output formats

/// %.17g
std::string formatReal(double x);
std::string hex64(std::uint64_t x);

inline constexpr std::string_view kRecordsCsvHeader =
    "trial_index,seed,n,D,S,max_pair,merged_imb";

void writeRecordsCsv(std::ostream& os, const std::vector<TrialRecord>& records);
std::string recordsCsv(const std::vector<TrialRecord>& records);

/// Summary JSON: config digest, then per group its parameters, D quantiles at
/// every checkpoint and the growth-law fit of the median series.
std::string summaryJson(const ExperimentConfig& config,
                        const std::vector<TrialGroup>& groups,
                        const std::vector<std::vector<TrialRecord>>& results);

std::string driftJson(const DriftProbeConfig& probe, const DriftProbeResult& result);

/// Columns s, L_s, T_s ("overflow" when saturated), tail_mass.
std::string omegaTableCsv(const LengthScaleTable& table);

} // namespace vecbal
