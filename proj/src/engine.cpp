#include "vecbal/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <sstream>
#include <thread>

namespace vecbal {

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string canonicalDistribution(const DistributionSpec& spec) {
  std::ostringstream os;
  os << variantName(spec) << '(';
  std::visit(
      [&](const auto& alt) {
        using T = std::decay_t<decltype(alt)>;
        if constexpr (std::is_same_v<T, UniformBall>) {
          os << "d=" << alt.d;
        } else if constexpr (std::is_same_v<T, Atomic>) {
          for (std::size_t i = 0; i < alt.atoms.size(); ++i) {
            os << (i ? ";" : "") << fmt17(alt.weights[i]) << '@';
            for (Index r = 0; r < alt.atoms[i].size(); ++r)
              os << (r ? "," : "") << fmt17(alt.atoms[i](r));
          }
        } else if constexpr (std::is_same_v<T, Mixture>) {
          for (std::size_t i = 0; i < alt.components.size(); ++i)
            os << (i ? ";" : "") << fmt17(alt.components[i].weight) << '*'
               << canonicalDistribution(alt.components[i].spec);
        } else {
          os << "omega=" << toString(alt.omega.kind)
             << ",exponent=" << fmt17(alt.omega.exponent) << ",points=";
          for (const auto& [x, y] : alt.omega.table)
            os << '[' << fmt17(x) << ',' << fmt17(y) << ']';
          os << ",sCap=" << alt.sCap;
        }
      },
      spec.v);
  os << ')';
  return os.str();
}

/// One-pass mean and variance.
struct Welford {
  std::int64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double maxAbs = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
    maxAbs = std::max(maxAbs, std::abs(x));
  }

  DriftEstimate report(const Bucket& b) const {
    DriftEstimate e;
    e.bucketLow = b.low;
    e.bucketHigh = b.high;
    e.count = n;
    e.maxAbsDelta = maxAbs;
    if (n > 0) {
      e.meanDelta = mean;
      const double var = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
      e.stdErr = std::sqrt(var / static_cast<double>(n));
    }
    return e;
  }
};

BinEnsemble makeProbeEnsemble(const TrialConfig& trial, const ProbeStart& start) {
  if (!start.initialSums) return BinEnsemble(trial.d, trial.k);
  const auto& m = *start.initialSums;
  if (m.rows() != trial.d || m.cols() != trial.k)
    throw UsageError("initialSums must be d x k (" + std::to_string(trial.d) +
                     " x " + std::to_string(trial.k) + ")");
  return BinEnsemble(m);
}

void restartEnsemble(BinEnsemble& ens, const ProbeStart& start) {
  if (start.initialSums)
    ens.reset(*start.initialSums);
  else
    ens.reset(Eigen::MatrixXd::Zero(ens.dim(), ens.bins()));
}

std::int64_t effectiveBurnIn(std::int64_t burnIn, int k) {
  return burnIn < 0 ? 10 * static_cast<std::int64_t>(k) : burnIn;
}

} // namespace

// ---------------------------------------------------------------------------

CheckpointSchedule checkpointSchedule(std::int64_t tMin, std::int64_t tMax,
                                      double ratio) {
  if (tMin < 1 || tMax < tMin)
    throw UsageError("checkpoint schedule needs 1 <= tMin <= tMax");
  if (!(ratio > 1.0) || !std::isfinite(ratio))
    throw UsageError("checkpoint ratio must be > 1");
  CheckpointSchedule out;
  for (int j = 0;; ++j) {
    const double raw = static_cast<double>(tMin) * std::pow(ratio, j);
    if (raw > static_cast<double>(tMax) + 0.5) break;
    const auto t = static_cast<std::int64_t>(std::llround(raw));
    if (t > tMax) break;
    if (t >= tMin && (out.times.empty() || t > out.times.back()))
      out.times.push_back(t);
  }
  if (out.times.empty() || out.times.back() != tMax) out.times.push_back(tMax);
  return out;
}

void TrialConfig::validate() const {
  validateStrategy(strategy, d, k);
  if (T < 1) throw ValidationError("T", "must be >= 1");
  distribution.validate();
  const int dd = distribution.bound(d).dimension();
  if (dd != d)
    throw ValidationError("distribution", "has dimension " + std::to_string(dd) +
                                              " but d = " + std::to_string(d));
  if (checkpoints.times.empty())
    throw ValidationError("checkpoints", "schedule is empty");
  for (std::size_t i = 0; i < checkpoints.times.size(); ++i) {
    const auto t = checkpoints.times[i];
    if (t < 1 || t > T)
      throw ValidationError("checkpoints", "times must lie in [1, T]");
    if (i > 0 && t <= checkpoints.times[i - 1])
      throw ValidationError("checkpoints", "times must be strictly increasing");
  }
}

std::string canonicalString(const TrialConfig& c) {
  std::ostringstream os;
  os << "d=" << c.d << ";k=" << c.k << ";T=" << c.T
     << ";strategy=" << toString(c.strategy)
     << ";distribution=" << canonicalDistribution(c.distribution.bound(c.d))
     << ";checkpoints=";
  for (std::size_t i = 0; i < c.checkpoints.times.size(); ++i)
    os << (i ? "," : "") << c.checkpoints.times[i];
  os << ";masterSeed=" << c.masterSeed << ";trialIndex=" << c.trialIndex;
  return os.str();
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t configDigest(const TrialConfig& config) {
  return fnv1a64(canonicalString(config));
}

bool samePayload(const TrialRecord& a, const TrialRecord& b) {
  return a.configDigest == b.configDigest && a.trialIndex == b.trialIndex &&
         a.seed == b.seed && a.records == b.records;
}

RunOptions runOptionsFromEnvironment() {
  RunOptions o;
  const char* flag = std::getenv("VECBAL_DEBUG_ASSERT");
  o.debugAsserts = flag != nullptr && std::string(flag) == "1";
  return o;
}

TrialRecord runTrial(const TrialConfig& config, const RunOptions& options) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();

  TrialRecord out;
  out.configDigest = configDigest(config);
  out.trialIndex = config.trialIndex;
  out.seed = deriveTrialSeed(config.masterSeed, config.trialIndex);
  out.records.reserve(config.checkpoints.times.size());

  const Sampler sampler(config.distribution.bound(config.d));
  CounterRng rng(out.seed);
  BinEnsemble ens(config.d, config.k);
  Vec v(config.d);

  // Debug-only: compensated running total of every sample, in column 0.
  BinEnsemble total(config.d, 2);
  double prevS = 0.0;

  double maxSq = 0.0;
  std::size_t next = 0;
  const auto& times = config.checkpoints.times;
  for (std::int64_t n = 1; n <= config.T; ++n) {
    sampler.sample(rng, v);
    const Assignment a = assign(config.strategy, v, ens, rng);
    ens.assign(v, a.bin);
    const double curSq = maxPairDistanceSquared(ens.sums());
    maxSq = std::max(maxSq, curSq);

    if (options.debugAsserts) {
      const std::string at = " at step " + std::to_string(n);
      total.assign(v, 0);
      const Vec binTotal = ens.sums().rowwise().sum();
      const double scale = std::max(1.0, total.bin(0).norm());
      if ((binTotal - total.bin(0)).norm() > 1e-9 * scale)
        throw InvariantViolation("conservation failed" + at);
      const double S = observableS(ens.sums());
      if (curSq > 2.0 * S / config.k * (1.0 + 1e-12) + 1e-12)
        throw InvariantViolation("triangle bound 2S/k >= maxPair^2 failed" + at);
      if (config.strategy == StrategyKind::InnerProduct &&
          S - prevS > (config.k - 1) * v.squaredNorm() + 1e-9 * std::max(1.0, S))
        throw InvariantViolation("one-step bound S' - S <= (k-1)|v|^2 failed" + at);
      if (config.strategy == StrategyKind::Greedy1D && std::sqrt(curSq) > 1.0 + 1e-9)
        throw InvariantViolation("greedy-1d spread exceeded 1" + at);
      prevS = S;
    }

    if (next < times.size() && times[next] == n) {
      CheckpointRecord r;
      r.n = n;
      r.D = std::sqrt(maxSq);
      r.S = observableS(ens.sums());
      r.curMaxPair = std::sqrt(curSq);
      r.mergedImb = mergedImbalance(ens.sums());
      out.records.push_back(r);
      ++next;
    }
  }

  out.wallTime = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                               started).count();
  return out;
}

std::vector<TrialRecord> runSweep(const std::vector<TrialConfig>& grid,
                                  int parallelism, const RunOptions& options) {
  auto describe = [&](std::size_t i) {
    return "trial " + std::to_string(i) + " (trialIndex " +
           std::to_string(grid[i].trialIndex) + ", k=" +
           std::to_string(grid[i].k) + ", d=" + std::to_string(grid[i].d) +
           ", T=" + std::to_string(grid[i].T) + ", strategy " +
           toString(grid[i].strategy) + "): ";
  };
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      grid[i].validate();
    } catch (const ValidationError& e) {
      throw ValidationError(e.field(), describe(i) + e.what());
    }
  }

  std::vector<TrialRecord> results(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());
  std::atomic<std::size_t> cursor{0};
  std::atomic<bool> failed{false};

  auto worker = [&] {
    for (;;) {
      if (failed.load()) return;
      const std::size_t i = cursor.fetch_add(1);
      if (i >= grid.size()) return;
      try {
        results[i] = runTrial(grid[i], options);
      } catch (...) {
        errors[i] = std::current_exception();
        failed.store(true);
      }
    }
  };

  const auto threads = static_cast<std::size_t>(std::clamp<std::int64_t>(
      parallelism, 1, std::max<std::int64_t>(1, static_cast<std::int64_t>(grid.size()))));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const InvariantViolation& e) {
      throw InvariantViolation(describe(i) + e.what());
    } catch (const UsageError& e) {
      throw UsageError(describe(i) + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error(describe(i) + e.what());
    }
  }
  return results;
}

// ---------------------------------------------------------------------------

DriftProbeResult runDriftProbe(const DriftProbeConfig& config) {
  const TrialConfig& trial = config.trial;
  TrialConfig checked = trial;
  checked.checkpoints.times = {trial.T};
  checked.validate();
  detail::checkPair(trial.k, config.pair.first, config.pair.second);
  if (config.nSteps < 1) throw UsageError("drift probe needs nSteps >= 1");
  if (config.buckets.empty()) throw UsageError("drift probe needs at least one bucket");
  {
    auto sorted = config.buckets;
    std::sort(sorted.begin(), sorted.end(),
              [](const Bucket& a, const Bucket& b) { return a.low < b.low; });
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (!(sorted[i].low <= sorted[i].high))
        throw UsageError("bucket bounds must satisfy low <= high");
      if (i > 0 && sorted[i].low <= sorted[i - 1].high)
        throw UsageError("buckets must be disjoint");
    }
  }

  const Sampler sampler(trial.distribution.bound(trial.d));
  CounterRng rng(deriveTrialSeed(trial.masterSeed, trial.trialIndex));
  BinEnsemble ens = makeProbeEnsemble(trial, config.start);
  Vec v(trial.d);
  const auto [pi, pj] = config.pair;

  auto step = [&] {
    sampler.sample(rng, v);
    const Assignment a = assign(trial.strategy, v, ens, rng);
    ens.assign(v, a.bin);
    return a;
  };
  auto pairSq = [&] { return (ens.bin(pi) - ens.bin(pj)).squaredNorm(); };
  auto bucketOf = [&](double A) -> std::ptrdiff_t {
    for (std::size_t b = 0; b < config.buckets.size(); ++b)
      if (A >= config.buckets[b].low && A <= config.buckets[b].high)
        return static_cast<std::ptrdiff_t>(b);
    return -1;
  };

  DriftProbeResult out;
  out.eventsAvailable = trial.strategy == StrategyKind::BestOfTwo;
  const std::size_t nb = config.buckets.size();
  std::vector<Welford> all(nb), both(nb), neither(nb), one(nb);

  const std::int64_t burnIn = effectiveBurnIn(config.burnIn, trial.k);
  for (std::int64_t t = 0; t < burnIn; ++t) step();

  for (std::int64_t t = 0; t < config.nSteps; ++t) {
    double A = pairSq();
    auto b = bucketOf(A);
    if (b < 0 && config.start.restartOnExit) {
      restartEnsemble(ens, config.start);
      ++out.restarts;
      A = pairSq();
      b = bucketOf(A);
    }
    const Assignment a = step();
    ++out.simulatedSteps;
    if (b < 0) continue;
    const double delta = pairSq() - A;
    all[b].add(delta);
    ++out.recordedSteps;
    if (out.eventsAvailable && a.pair) {
      const auto [x, y] = *a.pair;
      const int hits = (x == pi || x == pj) + (y == pi || y == pj);
      (hits == 2 ? both : hits == 0 ? neither : one)[b].add(delta);
    }
  }

  for (std::size_t b = 0; b < nb; ++b) {
    out.overall.push_back(all[b].report(config.buckets[b]));
    if (out.eventsAvailable) {
      out.bothChosen.push_back(both[b].report(config.buckets[b]));
      out.neitherChosen.push_back(neither[b].report(config.buckets[b]));
      out.oneChosen.push_back(one[b].report(config.buckets[b]));
    }
  }
  return out;
}

StepProbeResult runStepDistributionProbe(const StepProbeConfig& config) {
  const TrialConfig& trial = config.trial;
  TrialConfig checked = trial;
  checked.checkpoints.times = {trial.T};
  checked.validate();
  if (trial.strategy != StrategyKind::InnerProduct)
    throw UsageError("step-distribution probe requires the inner-product rule");
  if (!(config.ellHalf > 0.0)) throw UsageError("ellHalf must be positive");
  if (config.nSteps < 1) throw UsageError("step probe needs nSteps >= 1");

  const Sampler sampler(trial.distribution.bound(trial.d));
  CounterRng rng(deriveTrialSeed(trial.masterSeed, trial.trialIndex));
  BinEnsemble ens = makeProbeEnsemble(trial, config.start);
  Vec v(trial.d);
  auto step = [&] {
    sampler.sample(rng, v);
    ens.assign(v, assignInnerProduct(v, ens));
  };

  StepProbeResult out;
  const std::int64_t burnIn = effectiveBurnIn(config.burnIn, trial.k);
  for (std::int64_t t = 0; t < burnIn; ++t) step();

  const double decrementScale = std::sqrt(2.0 * config.ellHalf) / trial.k;
  for (std::int64_t t = 0; t < config.nSteps; ++t) {
    double S = observableS(ens.sums());
    if (S < config.ellHalf && config.start.restartOnExit) {
      restartEnsemble(ens, config.start);
      ++out.restarts;
      S = observableS(ens.sums());
    }
    step();
    ++out.simulatedSteps;
    if (S < config.ellHalf) continue;
    const double dS = observableS(ens.sums()) - S;
    ++out.visits;
    if (dS <= -decrementScale) ++out.decrements;
    if (dS >= -static_cast<double>(trial.k)) ++out.noDrops;
  }
  if (out.visits > 0) {
    out.pDecrement = static_cast<double>(out.decrements) / out.visits;
    out.pNoDrop = static_cast<double>(out.noDrops) / out.visits;
  }
  return out;
}

} // namespace vecbal
