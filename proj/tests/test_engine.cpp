#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "vecbal/engine.hpp"

using namespace vecbal;

namespace {

TrialConfig small(StrategyKind s, int d, int k, std::int64_t T) {
  TrialConfig t;
  t.d = d;
  t.k = k;
  t.T = T;
  t.strategy = s;
  t.checkpoints = checkpointSchedule(1, T, 3.0);
  return t;
}

Atomic plusMinusOne() {
  return Atomic{{Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, -1.0)},
                {0.5, 0.5}};
}

} // namespace

TEST_CASE("checkpointSchedule") {
  CHECK(checkpointSchedule(10, 1000, 10).times == std::vector<std::int64_t>{10, 100, 1000});
  CHECK(checkpointSchedule(5, 5, 2).times == std::vector<std::int64_t>{5});
  CHECK(checkpointSchedule(10, 1000, 3.1623).times ==
        std::vector<std::int64_t>{10, 32, 100, 316, 1000});
  CHECK(checkpointSchedule(1, 10, 1.1).times ==
        std::vector<std::int64_t>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  CHECK(checkpointSchedule(10, 150, 10).times == std::vector<std::int64_t>{10, 100, 150});
  CHECK_THROWS_AS(checkpointSchedule(0, 10, 2), UsageError);
  CHECK_THROWS_AS(checkpointSchedule(11, 10, 2), UsageError);
  CHECK_THROWS_AS(checkpointSchedule(1, 10, 1.0), UsageError);
}

TEST_CASE("TrialConfig validation") {
  auto t = small(StrategyKind::InnerProduct, 2, 2, 100);
  CHECK_NOTHROW(t.validate());

  auto check = [](TrialConfig c, const std::string& field) {
    try {
      c.validate();
      FAIL("expected a validation error for " << field);
    } catch (const ValidationError& e) {
      CHECK(e.field() == field);
    }
  };
  auto bad = t;
  bad.k = 1;
  check(bad, "k");
  bad = t;
  bad.d = 0;
  check(bad, "d");
  bad = t;
  bad.T = 50;
  check(bad, "checkpoints");
  bad = t;
  bad.strategy = StrategyKind::Greedy1D;
  check(bad, "strategy");
  bad = t;
  bad.distribution = UniformBall{3};
  check(bad, "distribution");
}

TEST_CASE("runTrial records") {
  SUBCASE("a single step") {
    auto t = small(StrategyKind::InnerProduct, 2, 2, 1);
    const auto r = runTrial(t);
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].n == 1);
    CHECK(r.records[0].D > 0);
    CHECK(r.seed == deriveTrialSeed(1, 0));
  }

  // Replays the trial by hand from its seed and compares every checkpoint.
  for (auto s : {StrategyKind::UniformRandom, StrategyKind::InnerProduct, StrategyKind::BestOfTwo}) {
    CAPTURE(toString(s));
    auto t = small(s, 3, 4, 3000);
    t.trialIndex = 5;
    const auto rec = runTrial(t);
    REQUIRE(rec.records.size() == t.checkpoints.times.size());

    const Sampler sampler(UniformBall{3});
    CounterRng rng(deriveTrialSeed(t.masterSeed, 5));
    BinEnsemble ens(3, 4);
    Vec total = Vec::Zero(3);
    double D = 0;
    std::size_t c = 0;
    for (std::int64_t n = 1; n <= t.T; ++n) {
      const Vec v = sampler.sample(rng);
      total += v;
      ens.assign(v, assign(s, v, ens, rng).bin);
      D = std::max(D, maxPairDistance(ens.sums()));
      if (c < t.checkpoints.times.size() && n == t.checkpoints.times[c]) {
        const auto& r = rec.records[c++];
        CHECK(r.n == n);
        CHECK(r.D == doctest::Approx(D).epsilon(1e-12));
        CHECK(r.S == doctest::Approx(observableS(ens.sums())).epsilon(1e-9));
        CHECK(r.curMaxPair == doctest::Approx(maxPairDistance(ens.sums())).epsilon(1e-9));
        CHECK(r.mergedImb == doctest::Approx(mergedImbalance(ens.sums())).epsilon(1e-9));
        CHECK((ens.sums().rowwise().sum() - total).norm() <= 1e-9 * std::max(1.0, total.norm()));
      }
    }
    CHECK(c == rec.records.size());
    for (std::size_t i = 1; i < rec.records.size(); ++i)
      CHECK(rec.records[i].D >= rec.records[i - 1].D);
    for (const auto& r : rec.records) CHECK(r.D >= r.curMaxPair);
  }
}

TEST_CASE("running max covers the steps between checkpoints") {
  auto t = small(StrategyKind::UniformRandom, 2, 2, 5000);
  t.checkpoints.times = {5000};
  const auto sparse = runTrial(t);
  t.checkpoints = checkpointSchedule(1, 5000, 1.0001);
  const auto dense = runTrial(t);
  double best = 0;
  for (const auto& r : dense.records) best = std::max(best, r.curMaxPair);
  CHECK(sparse.records.back().D == best);
}

TEST_CASE("debug assertions hold along real trajectories") {
  RunOptions o;
  o.debugAsserts = true;
  CHECK_NOTHROW(runTrial(small(StrategyKind::InnerProduct, 2, 3, 20000), o));
  CHECK_NOTHROW(runTrial(small(StrategyKind::BestOfTwo, 2, 5, 20000), o));
  CHECK_NOTHROW(runTrial(small(StrategyKind::Greedy1D, 1, 3, 20000), o));
}

TEST_CASE("reproducibility and digests") {
  const auto t = small(StrategyKind::BestOfTwo, 2, 3, 2000);
  CHECK(samePayload(runTrial(t), runTrial(t)));
  CHECK(configDigest(t) == configDigest(t));
  auto u = t;
  u.k = 4;
  CHECK(configDigest(u) != configDigest(t));
  u = t;
  u.trialIndex = 1;
  CHECK(configDigest(u) != configDigest(t));
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("runSweep") {
  CHECK(runSweep({}, 4).empty());

  std::vector<TrialConfig> grid;
  for (std::uint64_t i = 0; i < 100; ++i) {
    auto t = small(i % 2 ? StrategyKind::BestOfTwo : StrategyKind::UniformRandom, 2, 3, 300);
    t.trialIndex = i;
    grid.push_back(t);
  }
  const auto serial = runSweep(grid, 1);
  const auto parallel = runSweep(grid, 8);
  REQUIRE(serial.size() == 100);
  std::set<std::uint64_t> seeds;
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(samePayload(serial[i], parallel[i]));
    CHECK(serial[i].trialIndex == i);
    seeds.insert(serial[i].seed);
  }
  CHECK(seeds.size() == 100);

  grid[37].k = 1;
  try {
    runSweep(grid, 4);
    FAIL("expected the invalid trial to abort the sweep");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("37") != std::string::npos);
  }
}

TEST_CASE("drift probe") {
  SUBCASE("nothing moves under a point mass") {
    DriftProbeConfig p;
    p.trial = small(StrategyKind::BestOfTwo, 2, 3, 1);
    p.trial.distribution = pointMass(Eigen::Vector2d::Zero());
    p.buckets = {{0, 0}, {1, 2}};
    p.nSteps = 1000;
    const auto r = runDriftProbe(p);
    CHECK(r.overall[0].count == 1000);
    CHECK(r.overall[0].meanDelta == 0.0);
    CHECK(r.overall[0].maxAbsDelta == 0.0);
    CHECK(r.overall[1].count == 0);
    CHECK_FALSE(r.overall[1].meanDelta.has_value());
  }

  SUBCASE("the untouched pair does not move when neither bin is sampled") {
    DriftProbeConfig p;
    p.trial = small(StrategyKind::BestOfTwo, 2, 4, 1);
    p.buckets = {{0, 1e9}};
    p.nSteps = 50000;
    const auto r = runDriftProbe(p);
    REQUIRE(r.eventsAvailable);
    REQUIRE(r.neitherChosen[0].count > 5000);
    CHECK(r.neitherChosen[0].meanDelta == 0.0);
    CHECK(r.neitherChosen[0].maxAbsDelta == 0.0);
    CHECK(r.bothChosen[0].count + r.neitherChosen[0].count + r.oneChosen[0].count ==
          r.overall[0].count);
    // Pair {1, 2} is one of six: P(E+) = 1/6, P(E-) = 1/6.
    CHECK(double(r.neitherChosen[0].count) / r.overall[0].count == doctest::Approx(1.0 / 6).epsilon(0.05));
  }

  SUBCASE("mean reversion from a distance of about 10") {
    DriftProbeConfig p;
    p.trial = small(StrategyKind::InnerProduct, 2, 2, 1);
    Eigen::MatrixXd start = Eigen::MatrixXd::Zero(2, 2);
    start(0, 0) = 10.0;
    p.start = {start, true};
    p.burnIn = 0;
    p.buckets = {{90, 110}};
    p.nSteps = 100000;
    const auto r = runDriftProbe(p);
    const auto& e = r.overall[0];
    REQUIRE(e.meanDelta);
    CHECK(e.count >= 99000);
    CHECK(*e.meanDelta < 0);
    CHECK(std::abs(*e.meanDelta) >= 3 * e.stdErr);
    // One step at k = 2 changes A by |v|^2 - 2 |<v, delta>|, whose mean is
    // E|v|^2 - 2 |delta| E|v_1| = 1/2 - 2 |delta| 4/(3 pi) on the disk.
    const double c = 4.0 / (3.0 * std::acos(-1.0));
    CHECK(*e.meanDelta <= 0.5 - 2 * c * std::sqrt(90.0) + 3 * e.stdErr);
    CHECK(*e.meanDelta >= 0.5 - 2 * c * std::sqrt(110.0) - 3 * e.stdErr);
  }

  SUBCASE("bucket validation") {
    DriftProbeConfig p;
    p.trial = small(StrategyKind::BestOfTwo, 2, 3, 1);
    p.nSteps = 10;
    p.buckets = {{0, 2}, {1, 3}};
    CHECK_THROWS_AS(runDriftProbe(p), UsageError);
    p.buckets = {{0, 2}};
    p.pair = {0, 3};
    CHECK_THROWS_AS(runDriftProbe(p), UsageError);
  }
}

TEST_CASE("step distribution probe") {
  SUBCASE("point mass never visits") {
    StepProbeConfig p;
    p.trial = small(StrategyKind::InnerProduct, 2, 2, 1);
    p.trial.distribution = pointMass(Eigen::Vector2d::Zero());
    p.ellHalf = 1.0;
    p.nSteps = 1000;
    const auto r = runStepDistributionProbe(p);
    CHECK(r.visits == 0);
    CHECK_FALSE(r.pDecrement.has_value());
    CHECK_FALSE(r.pNoDrop.has_value());
  }

  SUBCASE("signed unit atoms always cancel from S >= 4") {
    StepProbeConfig p;
    p.trial = small(StrategyKind::InnerProduct, 1, 2, 1);
    p.trial.distribution = plusMinusOne();
    Eigen::MatrixXd start(1, 2);
    start << 2.0, 0.0;
    p.start = {start, true};
    p.burnIn = 0;
    p.ellHalf = 4.0;
    p.nSteps = 10000;
    const auto r = runStepDistributionProbe(p);
    CHECK(r.visits == 10000);
    CHECK(r.pNoDrop == 0.0);
    CHECK(r.pDecrement == 1.0); // dS = -2|delta| + 1 = -3 <= -sqrt(8)/2
  }

  SUBCASE("uniform disk decrements with positive frequency") {
    StepProbeConfig p;
    p.trial = small(StrategyKind::InnerProduct, 2, 2, 1);
    Eigen::MatrixXd start = Eigen::MatrixXd::Zero(2, 2);
    start(0, 0) = std::sqrt(60.0);
    p.start = {start, true};
    p.ellHalf = 50.0;
    p.nSteps = 100000;
    const auto r = runStepDistributionProbe(p);
    CHECK(r.visits >= 90000);
    REQUIRE(r.pDecrement);
    CHECK(*r.pDecrement > 0.0);
  }

  SUBCASE("requires the inner-product rule") {
    StepProbeConfig p;
    p.trial = small(StrategyKind::BestOfTwo, 2, 2, 1);
    p.ellHalf = 1.0;
    p.nSteps = 1;
    CHECK_THROWS_AS(runStepDistributionProbe(p), UsageError);
  }
}
