#include <cmath>
#include <map>

#include "doctest.h"
#include "vecbal/distributions.hpp"
#include "vecbal/strategies.hpp"

using namespace vecbal;

namespace {

BinEnsemble line(std::initializer_list<double> sums) {
  Eigen::MatrixXd m(1, static_cast<Index>(sums.size()));
  Index c = 0;
  for (double s : sums) m(0, c++) = s;
  return BinEnsemble(m);
}

Eigen::VectorXd scalar(double x) { return Eigen::VectorXd::Constant(1, x); }

} // namespace

TEST_CASE("names round-trip") {
  for (auto k : {StrategyKind::UniformRandom, StrategyKind::Greedy1D, StrategyKind::InnerProduct,
                 StrategyKind::BestOfTwo})
    CHECK(strategyFromString(toString(k)) == k);
  CHECK(toString(StrategyKind::BestOfTwo) == "best-of-two");
  CHECK_THROWS_AS(strategyFromString("power-of-two"), ValidationError);
}

TEST_CASE("validateStrategy") {
  CHECK_NOTHROW(validateStrategy(StrategyKind::Greedy1D, 1, 3));
  try {
    validateStrategy(StrategyKind::Greedy1D, 2, 2);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "strategy");
    CHECK(std::string(e.what()).find("d = 1") != std::string::npos);
  }
  CHECK_NOTHROW(validateStrategy(StrategyKind::BestOfTwo, 5, 2));
}

TEST_CASE("uniform random is uniform") {
  for (int k : {2, 5}) {
    BinEnsemble ens(2, k);
    CounterRng rng(k);
    std::vector<int> hits(k);
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++hits[assignUniformRandom(Eigen::Vector2d(1, 0), ens, rng)];
    CHECK(rng.drawCount() == n);
    const double p = 1.0 / k;
    for (int h : hits) CHECK(std::abs(double(h) / n - p) <= 3 * std::sqrt(p * (1 - p) / n));
  }
}

TEST_CASE("greedy-1d") {
  const auto ens = line({0.4, -0.2, 0.1});
  CHECK(assignGreedy1D(scalar(0.3), ens) == 1);
  CHECK(assignGreedy1D(scalar(-0.5), ens) == 0);
  CHECK(assignGreedy1D(scalar(0.0), ens) == 1);
  CHECK(assignGreedy1D(scalar(0.7), line({0, 0})) == 0);
  CHECK(assignGreedy1D(scalar(-0.7), line({0, 0})) == 0);
  CHECK(assignGreedy1D(scalar(-0.7), line({-1, 2, 2})) == 1);
  CHECK_THROWS_AS(assignGreedy1D(Eigen::Vector2d(1, 0), BinEnsemble(2, 2)), UsageError);
}

TEST_CASE("inner product") {
  Eigen::MatrixXd m(2, 2);
  m << 1, 0, 0, 1;
  const BinEnsemble ens(m);
  CHECK(assignInnerProduct(Eigen::Vector2d(1, 0), ens) == 1);
  CHECK(assignInnerProduct(Eigen::Vector2d(1, 1) / std::sqrt(2.0), ens) == 0);
  CHECK(assignInnerProduct(Eigen::Vector2d(0.3, -0.2), BinEnsemble(2, 4)) == 0);
  CHECK_THROWS_AS(assignInnerProduct(Eigen::Vector3d(1, 0, 0), ens), UsageError);
}

TEST_CASE("best-of-two") {
  SUBCASE("forced pair") {
    Eigen::MatrixXd m(2, 3);
    m << 1, 0, -1, 0, 0, 0;
    const BinEnsemble ens(m);
    CHECK(bestOfPair(Eigen::Vector2d(1, 0), ens, {0, 2}) == 2);
    CHECK(bestOfPair(Eigen::Vector2d(1, 0), ens, {2, 0}) == 2);
    CHECK(bestOfPair(Eigen::Vector2d(0, 1), ens, {2, 0}) == 0); // tie
  }

  SUBCASE("k = 2 agrees with inner product and draws nothing") {
    const Sampler sampler(UniformBall{2});
    CounterRng rng(3), strategyRng(4);
    BinEnsemble ens(2, 2);
    for (int i = 0; i < 10000; ++i) {
      const Vec v = sampler.sample(rng);
      const auto a = assignBestOfTwo(v, ens, strategyRng);
      REQUIRE(a.bin == assignInnerProduct(v, ens));
      REQUIRE(a.pair == BinPair{0, 1});
      ens.assign(v, a.bin);
    }
    CHECK(strategyRng.drawCount() == 0);
  }

  SUBCASE("k = 3 pairs are uniform") {
    BinEnsemble ens(2, 3);
    CounterRng rng(9);
    std::map<BinPair, int> hits;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      const auto a = assignBestOfTwo(Eigen::Vector2d(0.1, 0.2), ens, rng);
      REQUIRE(a.pair);
      REQUIRE(a.pair->first < a.pair->second);
      ++hits[*a.pair];
    }
    CHECK(rng.drawCount() == 2 * n);
    REQUIRE(hits.size() == 3);
    const double p = 1.0 / 3;
    for (auto [pair, h] : hits) CHECK(std::abs(double(h) / n - p) <= 3 * std::sqrt(p * (1 - p) / n));
  }
}

TEST_CASE("dispatcher") {
  BinEnsemble ens(1, 3);
  CounterRng rng(1);
  CHECK(assign(StrategyKind::Greedy1D, scalar(0.5), ens, rng).bin == 0);
  CHECK(assign(StrategyKind::InnerProduct, scalar(0.5), ens, rng).bin == 0);
  CHECK(rng.drawCount() == 0);
  assign(StrategyKind::UniformRandom, scalar(0.5), ens, rng);
  CHECK(rng.drawCount() == 1);
  CHECK(assign(StrategyKind::BestOfTwo, scalar(0.5), ens, rng).pair.has_value());
  CHECK(rng.drawCount() == 3);
}
