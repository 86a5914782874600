#include "vecbal/verify.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "vecbal/config.hpp"
#include "vecbal/engine.hpp"

namespace vecbal {

namespace {

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Drives one trajectory step by step, calling `check` after every step.
/// Returns an empty string on success or the first failure message.
std::string walk(int d, int k, StrategyKind strategy, const DistributionSpec& dist,
                 std::uint64_t seed, std::int64_t steps,
                 const std::function<std::string(const BinEnsemble&, const Vec&,
                                                 std::int64_t)>& check) {
  const Sampler sampler(dist.bound(d));
  CounterRng rng(seed);
  BinEnsemble ens(d, k);
  Vec v(d);
  for (std::int64_t n = 1; n <= steps; ++n) {
    sampler.sample(rng, v);
    ens.assign(v, assign(strategy, v, ens, rng).bin);
    if (auto msg = check(ens, v, n); !msg.empty()) return msg;
  }
  return {};
}

CheckResult conservation(const VerifyOptions& o) {
  CheckResult r{"conservation: sum of bins equals sum of samples", true, ""};
  for (int k : {2, 5}) {
    BinEnsemble total(3, 2);
    double worst = 0.0;
    auto msg = walk(3, k, StrategyKind::UniformRandom, UniformBall{}, deriveTrialSeed(o.masterSeed, 11),
                    o.conservationSteps, [&](const BinEnsemble& ens, const Vec& v, std::int64_t n) {
                      total.assign(v, 0);
                      const Vec bins = ens.sums().rowwise().sum();
                      const double err = (bins - total.bin(0)).norm() /
                                         std::max(1.0, total.bin(0).norm());
                      worst = std::max(worst, err);
                      if (err > 1e-9) return "relative error " + formatReal(err) +
                                                 " at step " + std::to_string(n);
                      return std::string{};
                    });
    if (!msg.empty()) return {r.name, false, "k=" + std::to_string(k) + ": " + msg};
    r.detail += "k=" + std::to_string(k) + " worst rel err " + formatReal(worst) + "; ";
  }
  return r;
}

CheckResult triangle(const VerifyOptions& o) {
  CheckResult r{"triangle bound: 2 S / k >= maxPair^2 at every step", true, ""};
  for (auto s : {StrategyKind::InnerProduct, StrategyKind::BestOfTwo, StrategyKind::UniformRandom}) {
    auto msg = walk(3, 5, s, UniformBall{}, deriveTrialSeed(o.masterSeed, 12),
                    o.innerProductSteps, [](const BinEnsemble& ens, const Vec&, std::int64_t n) {
                      const double S = observableS(ens.sums());
                      const double m2 = maxPairDistanceSquared(ens.sums());
                      if (m2 > 2.0 * S / ens.bins() * (1.0 + 1e-12))
                        return "violated at step " + std::to_string(n);
                      return std::string{};
                    });
    if (!msg.empty()) return {r.name, false, toString(s) + ": " + msg};
  }
  r.detail = "inner-product, best-of-two, uniform-random; d=3 k=5";
  return r;
}

CheckResult oneStepBound(const VerifyOptions& o) {
  CheckResult r{"inner-product one-step bound: S' - S <= k - 1", true, ""};
  for (int k : {2, 3, 5}) {
    double prev = 0.0, worst = -1e300;
    auto msg = walk(2, k, StrategyKind::InnerProduct, UniformBall{},
                    deriveTrialSeed(o.masterSeed, 13), o.innerProductSteps,
                    [&](const BinEnsemble& ens, const Vec& v, std::int64_t n) {
                      const double S = observableS(ens.sums());
                      const double inc = S - prev;
                      prev = S;
                      worst = std::max(worst, inc);
                      const double tol = 1e-9 * std::max(1.0, S);
                      if (inc > (k - 1) * v.squaredNorm() + tol || inc > (k - 1) + tol)
                        return "increment " + formatReal(inc) + " at step " + std::to_string(n);
                      return std::string{};
                    });
    if (!msg.empty()) return {r.name, false, "k=" + std::to_string(k) + ": " + msg};
    r.detail += "k=" + std::to_string(k) + " max increment " + formatReal(worst) + "; ";
  }
  return r;
}

CheckResult greedyBounded(const VerifyOptions& o) {
  CheckResult r{"greedy-1d: D <= 1 at every step", true, ""};
  for (int k : {2, 3, 5}) {
    double worst = 0.0;
    auto msg = walk(1, k, StrategyKind::Greedy1D, UniformBall{}, deriveTrialSeed(o.masterSeed, 14),
                    o.greedySteps, [&](const BinEnsemble& ens, const Vec&, std::int64_t n) {
                      const double spread = maxPairDistance(ens.sums());
                      worst = std::max(worst, spread);
                      if (spread > 1.0 + 1e-9)
                        return "spread " + formatReal(spread) + " at step " + std::to_string(n);
                      return std::string{};
                    });
    if (!msg.empty()) return {r.name, false, "k=" + std::to_string(k) + ": " + msg};
    r.detail += "k=" + std::to_string(k) + " D=" + formatReal(worst) + "; ";
  }
  return r;
}

CheckResult bestOfTwoEquivalence(const VerifyOptions& o) {
  CheckResult r{"best-of-two equals inner-product at k = 2", true, ""};
  const Sampler sampler(UniformBall{2});
  CounterRng rngA(deriveTrialSeed(o.masterSeed, 15)), rngB = rngA;
  BinEnsemble a(2, 2), b(2, 2);
  Vec va(2), vb(2);
  for (std::int64_t n = 1; n <= o.equivalenceSteps; ++n) {
    sampler.sample(rngA, va);
    sampler.sample(rngB, vb);
    const Index ha = assignInnerProduct(va, a);
    const Index hb = assignBestOfTwo(vb, b, rngB).bin;
    if (ha != hb || va != vb)
      return {r.name, false, "decisions diverge at step " + std::to_string(n)};
    a.assign(va, ha);
    b.assign(vb, hb);
  }

  TrialConfig t;
  t.d = 2;
  t.k = 2;
  t.T = 10000;
  t.checkpoints = checkpointSchedule(10, t.T, 10.0);
  t.masterSeed = o.masterSeed;
  const auto ip = runTrial(t);
  t.strategy = StrategyKind::BestOfTwo;
  const auto b2 = runTrial(t);
  if (ip.records != b2.records) return {r.name, false, "runTrial records differ"};
  r.detail = std::to_string(o.equivalenceSteps) + " decisions and a 10^4-step trial agree";
  return r;
}

CheckResult golden(const VerifyOptions& o) {
  CheckResult r{"golden trajectory is byte-reproducible", true, ""};
  try {
    const auto config = loadConfig(o.goldenDir + "/" + kGoldenConfigFile);
    const auto expected = readFile(o.goldenDir + "/" + kGoldenRecordsFile);
    const auto groups = expandGroups(config);
    std::vector<TrialRecord> first, second;
    for (const auto& g : groups) {
      for (auto& rec : runSweep(g.trials, 1)) first.push_back(rec);
      for (auto& rec : runSweep(g.trials, 2)) second.push_back(rec);
    }
    const auto a = recordsCsv(first);
    const auto b = recordsCsv(second);
    if (a != b) return {r.name, false, "two runs differ"};
    if (a != expected) return {r.name, false, "output differs from committed golden file"};
    r.detail = std::to_string(a.size()) + " bytes match " + kGoldenRecordsFile;
  } catch (const std::exception& e) {
    return {r.name, false, e.what()};
  }
  return r;
}

} // namespace

std::vector<CheckResult> runInvariantSuite(const VerifyOptions& options) {
  return {conservation(options), triangle(options),     oneStepBound(options),
          greedyBounded(options), bestOfTwoEquivalence(options), golden(options)};
}

} // namespace vecbal
