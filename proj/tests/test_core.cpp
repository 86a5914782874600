#include <cmath>

#include "doctest.h"
#include "vecbal/core.hpp"
#include "vecbal/rng.hpp"

using namespace vecbal;

namespace {

BinEnsemble fromColumns(std::initializer_list<std::pair<double, double>> cols) {
  Eigen::MatrixXd m(2, static_cast<Index>(cols.size()));
  Index c = 0;
  for (auto [x, y] : cols) m.col(c++) << x, y;
  return BinEnsemble(m);
}

// Pair-by-pair reference for S, kept deliberately naive.
double naiveS(const Eigen::MatrixXd& b) {
  double s = 0;
  for (Index i = 0; i < b.cols(); ++i)
    for (Index j = i + 1; j < b.cols(); ++j)
      for (Index r = 0; r < b.rows(); ++r) s += (b(r, i) - b(r, j)) * (b(r, i) - b(r, j));
  return s;
}

} // namespace

TEST_CASE("pairDelta") {
  const auto ens = fromColumns({{1, 0}, {0, 1}});
  CHECK(pairDelta(ens, 0, 1) == Eigen::Vector2d(1, -1));
  CHECK(pairDelta(ens, 1, 0) == -pairDelta(ens, 0, 1));

  const BinEnsemble fresh(3, 4);
  CHECK(pairDelta(fresh, 2, 3).isZero());
  CHECK_THROWS_AS(pairDelta(fresh, 0, 4), UsageError);
  CHECK_THROWS_AS(pairDelta(fresh, -1, 0), UsageError);
  CHECK_THROWS_AS(pairDelta(fresh, 1, 1), UsageError);
}

TEST_CASE("observableS and maxPairDistance") {
  const auto two = fromColumns({{3, 4}, {0, 0}});
  CHECK(observableS(two) == 25.0);
  CHECK(maxPairDistance(two) == 5.0);

  const auto three = fromColumns({{1, 0}, {0, 0}, {0, 1}});
  CHECK(observableS(three) == 4.0);
  CHECK(maxPairDistance(three) == doctest::Approx(std::sqrt(2.0)));

  const BinEnsemble fresh(2, 5);
  CHECK(observableS(fresh) == 0.0);
  CHECK(maxPairDistance(fresh) == 0.0);
}

TEST_CASE("S is invariant under bin relabelling and meets the triangle bound") {
  CounterRng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Index k = 2 + static_cast<Index>(rng.index(6));
    Eigen::MatrixXd m(3, k);
    for (Index c = 0; c < k; ++c)
      for (Index r = 0; r < 3; ++r) m(r, c) = 10 * (rng.uniform() - 0.5);
    const double S = observableS(m);
    CHECK(S == doctest::Approx(naiveS(m)));

    Eigen::PermutationMatrix<Eigen::Dynamic> perm(k);
    perm.setIdentity();
    for (Index c = k - 1; c > 0; --c)
      perm.applyTranspositionOnTheRight(c, static_cast<Index>(rng.index(static_cast<std::size_t>(c + 1))));
    CHECK(observableS(Eigen::MatrixXd(m * perm)) == doctest::Approx(S));

    CHECK(maxPairDistanceSquared(m) <= 2.0 * S / static_cast<double>(k) * (1 + 1e-12));
    const auto sq = pairSquaredDistances(m);
    CHECK(sq.maxCoeff() == doctest::Approx(maxPairDistanceSquared(m)));
  }
}

TEST_CASE("applyAssignment") {
  const BinEnsemble fresh(2, 2);
  const auto one = applyAssignment(fresh, Eigen::Vector2d(0.5, 0), 0);
  CHECK(one.bin(0) == Eigen::Vector2d(0.5, 0));
  CHECK(one.bin(1).isZero());
  CHECK(one.steps() == 1);
  CHECK(fresh.steps() == 0);

  const auto back = applyAssignment(applyAssignment(one, Eigen::Vector2d(0.3, -0.7), 1),
                                    Eigen::Vector2d(-0.3, 0.7), 1);
  CHECK(back.sums() == one.sums());
  CHECK(back.steps() == 3);

  CHECK_THROWS_AS(applyAssignment(fresh, Eigen::Vector3d(1, 0, 0), 0), UsageError);
  CHECK_THROWS_AS(applyAssignment(fresh, Eigen::Vector2d(1, 0), 2), UsageError);
}

TEST_CASE("compensated sums conserve mass over many small steps") {
  BinEnsemble ens(1, 2);
  Eigen::VectorXd v(1);
  v << 0.1;
  for (int i = 0; i < 1000000; ++i) ens.assign(v, 0);
  // 10^6 naive additions of 0.1 drift by about 1e-6; compensation holds it to an ulp.
  CHECK(std::abs(ens.bin(0)(0) - 100000.0) < 1e-9);
}

TEST_CASE("mergedImbalance") {
  CounterRng rng(8);
  Eigen::MatrixXd two = Eigen::MatrixXd::Random(2, 2);
  CHECK(mergedImbalance(two) == maxPairDistance(two));

  const auto four = fromColumns({{1, 0}, {1, 0}, {0, 0}, {0, 0}});
  CHECK(mergedImbalance(four) == 2.0);

  const auto three = fromColumns({{2, 0}, {0, 0}, {0, 0}});
  CHECK(mergedImbalance(three) == 4.0);
}

TEST_CASE("templated on the scalar type") {
  BasicBinEnsemble<float> ens(2, 3);
  ens.assign(Eigen::Vector2f(3, 4), 1);
  CHECK(observableS(ens.sums()) == 50.0f);
  CHECK(maxPairDistance(ens.sums()) == 5.0f);
}
