#pragma once

// Reproducible trial execution and the one-step probes.
//
// A trial owns one BinEnsemble and one CounterRng seeded with
// deriveTrialSeed(masterSeed, trialIndex). Each step draws v from the
// distribution, then asks the strategy, so the stream interleaves
// [sample draws][strategy draws] per step.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vecbal/core.hpp"
#include "vecbal/distributions.hpp"
#include "vecbal/rng.hpp"
#include "vecbal/strategies.hpp"

namespace vecbal {

struct CheckpointSchedule {
  std::vector<std::int64_t> times; // strictly increasing, >= 1
  friend bool operator==(const CheckpointSchedule&, const CheckpointSchedule&) = default;
};

/// {round(tMin * ratio^j)} within [tMin, tMax], deduplicated, tMax included.
CheckpointSchedule checkpointSchedule(std::int64_t tMin, std::int64_t tMax,
                                      double ratio);

struct TrialConfig {
  int d = 2;
  int k = 2;
  std::int64_t T = 1000;
  StrategyKind strategy = StrategyKind::InnerProduct;
  DistributionSpec distribution = UniformBall{};
  CheckpointSchedule checkpoints;
  std::uint64_t masterSeed = 1;
  std::uint64_t trialIndex = 0;

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

/// Canonical one-line description; input to configDigest.
std::string canonicalString(const TrialConfig& config);
/// FNV-1a 64 of canonicalString.
std::uint64_t configDigest(const TrialConfig& config);
std::uint64_t fnv1a64(std::string_view bytes);

struct CheckpointRecord {
  std::int64_t n = 0;
  double D = 0.0;          // running max of the max pair distance over 1..n
  double S = 0.0;
  double curMaxPair = 0.0; // max pair distance at n
  double mergedImb = 0.0;
  friend bool operator==(const CheckpointRecord&, const CheckpointRecord&) = default;
};

struct TrialRecord {
  std::uint64_t configDigest = 0;
  std::uint64_t trialIndex = 0;
  std::uint64_t seed = 0;
  std::vector<CheckpointRecord> records;
  double wallTime = 0.0; // seconds; not part of the reproducible payload
};

/// Reproducible payload equality (everything except wallTime).
bool samePayload(const TrialRecord& a, const TrialRecord& b);

struct RunOptions {
  /// Per-step invariant checks: conservation, the one-step S bound under
  /// inner-product, D <= 1 under greedy-1d, the triangle bound.
  bool debugAsserts = false;
};

/// Reads VECBAL_DEBUG_ASSERT from the environment.
RunOptions runOptionsFromEnvironment();

TrialRecord runTrial(const TrialConfig& config, const RunOptions& options = {});

/// Trials in grid order, identical for every parallelism level.
std::vector<TrialRecord> runSweep(const std::vector<TrialConfig>& grid,
                                  int parallelism,
                                  const RunOptions& options = {});

// ---------------------------------------------------------------------------
// probes

/// Optional non-zero start for the probes. The observables the probes
/// condition on (a pair distance of 10, S >= 50) are far outside the range a
/// trial visits from the all-zero state, so a probe may start the ensemble at
/// `initialSums` (d x k) and, with `restartOnExit`, reset to it whenever the
/// conditioning observable leaves its region. Every recorded transition is
/// still one genuine step of the rule from the current state.
struct ProbeStart {
  std::optional<Eigen::MatrixXd> initialSums;
  bool restartOnExit = false;
};

struct Bucket {
  double low = 0.0;
  double high = 0.0;
};

struct DriftEstimate {
  double bucketLow = 0.0;
  double bucketHigh = 0.0;
  std::optional<double> meanDelta; // absent when count == 0
  double stdErr = 0.0;
  std::int64_t count = 0;
  double maxAbsDelta = 0.0;
};

/// Per-bucket statistics of A_{n+1} - A_n with A_n = ||B_i - B_j||^2, overall
/// and split by which bins the best-of-two rule sampled.
struct DriftProbeResult {
  std::vector<DriftEstimate> overall;
  bool eventsAvailable = false;  // best-of-two only
  std::vector<DriftEstimate> bothChosen;    // E+: the sampled pair is {i, j}
  std::vector<DriftEstimate> neitherChosen; // E-: neither i nor j sampled
  std::vector<DriftEstimate> oneChosen;     // exactly one of i, j sampled
  std::int64_t simulatedSteps = 0;
  std::int64_t recordedSteps = 0;
  std::int64_t restarts = 0;
};

struct DriftProbeConfig {
  TrialConfig trial;
  BinPair pair{0, 1}; // 0-based
  std::vector<Bucket> buckets;
  std::int64_t burnIn = -1; // -1: 10 k
  std::int64_t nSteps = 0;  // steps simulated after burn-in
  ProbeStart start;
};

DriftProbeResult runDriftProbe(const DriftProbeConfig& config);

struct StepProbeConfig {
  TrialConfig trial; // strategy must be inner-product
  double ellHalf = 0.0;
  std::int64_t burnIn = -1; // -1: 10 k
  std::int64_t nSteps = 0;
  ProbeStart start;
};

struct StepProbeResult {
  std::optional<double> pDecrement; // P(S_{t+1} - S_t <= -sqrt(2 ellHalf)/k)
  std::optional<double> pNoDrop;    // P(S_{t+1} - S_t >= -k)
  std::int64_t visits = 0;          // steps with S_t >= ellHalf
  std::int64_t decrements = 0;
  std::int64_t noDrops = 0;
  std::int64_t simulatedSteps = 0;
  std::int64_t restarts = 0;
};

StepProbeResult runStepDistributionProbe(const StepProbeConfig& config);

} // namespace vecbal
