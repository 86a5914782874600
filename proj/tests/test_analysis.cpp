#include <cmath>

#include "doctest.h"
#include "vecbal/analysis.hpp"

using namespace vecbal;

namespace {

Series planted(GrowthModel m, double slope) {
  Series s;
  for (double T = 1e3; T <= 1e6 * 1.0001; T *= std::sqrt(10.0)) s.emplace_back(T, slope * growth(m, T));
  return s;
}

TrialRecord trialWith(std::vector<std::pair<std::int64_t, double>> points) {
  TrialRecord r;
  for (auto [n, D] : points) r.records.push_back({n, D, 0, 0, 0});
  return r;
}

const ModelFit& fitFor(const FitReport& r, GrowthModel m) {
  for (const auto& f : r.perModel)
    if (f.model == m) return f;
  throw std::logic_error("model missing");
}

} // namespace

TEST_CASE("growth functions") {
  const double T = 1e4, L = std::log(T);
  CHECK(growth(GrowthModel::Const, T) == 1.0);
  CHECK(growth(GrowthModel::SqrtLogOverLogLog, T) == doctest::Approx(std::sqrt(L / std::log(L))));
  CHECK(growth(GrowthModel::SqrtLog, T) == doctest::Approx(std::sqrt(L)));
  CHECK(growth(GrowthModel::Log, T) == doctest::Approx(L));
  CHECK(growth(GrowthModel::SqrtTLogT, T) == doctest::Approx(std::sqrt(T * L)));
  CHECK_THROWS_AS(growth(GrowthModel::Log, 2.0), UsageError);
}

TEST_CASE("fitScaling") {
  SUBCASE("exact sqrt log") {
    const auto r = fitScaling(planted(GrowthModel::SqrtLog, 3.0));
    CHECK(r.bestModel == GrowthModel::SqrtLog);
    CHECK(fitFor(r, GrowthModel::SqrtLog).slope == doctest::Approx(3.0));
    CHECK(fitFor(r, GrowthModel::SqrtLog).relativeResidual < 1e-12);
    for (auto [T, ratio] : r.ratioSeries) CHECK(ratio == doctest::Approx(3.0));
  }

  SUBCASE("constant") {
    Series s{{10, 7}, {100, 7}, {1000, 7}, {1e4, 7}};
    const auto r = fitScaling(s);
    CHECK(r.bestModel == GrowthModel::Const);
    CHECK(fitFor(r, GrowthModel::Const).slope == doctest::Approx(7.0));
  }

  SUBCASE("noisy log is recovered") {
    CounterRng rng(2);
    Series s;
    for (double T = 1e3; T <= 1e6 * 1.0001; T *= std::pow(10.0, 0.25))
      s.emplace_back(T, 2.0 * std::log(T) + 0.2 * (rng.uniform() - 0.5));
    const auto r = fitScaling(s);
    CHECK(r.bestModel == GrowthModel::Log);
    CHECK(std::abs(fitFor(r, GrowthModel::Log).slope - 2.0) <= 0.1);
  }

  SUBCASE("every model recovers its planted slope") {
    for (auto m : allGrowthModels()) {
      const auto r = fitScaling(planted(m, 1.7));
      CHECK(fitFor(r, m).slope == doctest::Approx(1.7).epsilon(0.05));
      CHECK(r.bestModel == m);
      for (const auto& f : r.perModel) CHECK(f.relativeResidual >= 0);
    }
  }

  CHECK_THROWS_AS(fitScaling({{10, 1}, {100, 2}}), UsageError);
}

TEST_CASE("ratioStability") {
  const auto exact = ratioStability(planted(GrowthModel::Log, 4.0), GrowthModel::Log);
  REQUIRE(exact.spread);
  CHECK(*exact.spread == doctest::Approx(1.0));

  const auto two = ratioStability({{1e3, 1}, {1e6, 2}}, GrowthModel::Const);
  CHECK(two.spread == 2.0);
  CHECK(two.maxRatio == 2.0);
  CHECK(two.minRatio == 1.0);

  const auto zero = ratioStability({{1e3, 0}, {1e6, 2}}, GrowthModel::Const);
  CHECK_FALSE(zero.spread.has_value());

  CounterRng rng(8);
  Series s;
  for (double T = 10; T < 1e6; T *= 3) s.emplace_back(T, rng.uniform() * 5 + 0.01);
  for (auto m : allGrowthModels()) CHECK(*ratioStability(s, m).spread >= 1.0);
}

TEST_CASE("quantiles") {
  CHECK(nearestRankQuantile({3, 1, 2}, 0.5) == 2);
  CHECK(nearestRankQuantile({3, 1, 2}, 0.0) == 1);
  CHECK(nearestRankQuantile({3, 1, 2}, 1.0) == 3);
  CHECK(nearestRankQuantile({4, 1, 3, 2}, 0.5) == 2);

  const auto a = trialWith({{10, 1}, {100, 5}});
  const auto b = trialWith({{10, 2}, {100, 4}});
  const auto c = trialWith({{10, 3}, {100, 6}});

  const auto single = aggregateQuantiles({a}, {0.5});
  CHECK(single.D[0] == std::vector<double>{1, 5});
  CHECK(single.times == std::vector<std::int64_t>{10, 100});

  const auto q = aggregateQuantiles({a, b, c}, {0, 0.5, 1});
  CHECK(q.D[0] == std::vector<double>{1, 4});
  CHECK(q.D[1] == std::vector<double>{2, 5});
  CHECK(q.D[2] == std::vector<double>{3, 6});

  CHECK(medianSeries({a, b, c}) == Series{{10, 2}, {100, 5}});
  CHECK(window(medianSeries({a, b, c}), 50, 1000) == Series{{100, 5}});

  CHECK_THROWS_AS(aggregateQuantiles({a, trialWith({{10, 1}, {99, 5}})}, {0.5}), UsageError);
  CHECK_THROWS_AS(aggregateQuantiles({a}, {1.5}), UsageError);
}
