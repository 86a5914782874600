#pragma once

// Online assignment rules. Every rule maps (incoming vector, current bin sums,
// random stream) to a bin index; deterministic rules ignore the stream.
// Ties always go to the lowest bin index.

#include <optional>
#include <string>
#include <utility>

#include "vecbal/core.hpp"
#include "vecbal/rng.hpp"

namespace vecbal {

enum class StrategyKind { UniformRandom, Greedy1D, InnerProduct, BestOfTwo };

std::string toString(StrategyKind kind);
/// Accepts "uniform-random", "greedy-1d", "inner-product", "best-of-two".
StrategyKind strategyFromString(const std::string& name);

/// Throws ValidationError("strategy", ...) when the rule cannot run at (d, k).
void validateStrategy(StrategyKind kind, int d, int k);

using BinPair = std::pair<Index, Index>;

struct Assignment {
  Index bin = 0;
  std::optional<BinPair> pair; // sampled pair, best-of-two only
};

/// One draw. Independent of v and of the bin sums.
template <typename Derived>
Index assignUniformRandom(const Eigen::MatrixBase<Derived>& /*v*/,
                          const BinEnsemble& ens, CounterRng& rng) {
  return static_cast<Index>(rng.index(static_cast<std::size_t>(ens.bins())));
}

/// Negative values go to the largest bin, everything else to the smallest.
template <typename Derived>
Index assignGreedy1D(const Eigen::MatrixBase<Derived>& v, const BinEnsemble& ens) {
  if (ens.dim() != 1 || v.size() != 1)
    throw UsageError("greedy-1d requires d = 1");
  const auto row = ens.sums().row(0);
  Index best = 0;
  if (v(0) < 0.0) {
    for (Index i = 1; i < ens.bins(); ++i)
      if (row(i) > row(best)) best = i;
  } else {
    for (Index i = 1; i < ens.bins(); ++i)
      if (row(i) < row(best)) best = i;
  }
  return best;
}

/// argmin_i <v, B_i>.
template <typename Derived>
Index assignInnerProduct(const Eigen::MatrixBase<Derived>& v, const BinEnsemble& ens) {
  if (v.size() != ens.dim())
    throw UsageError("vector length does not match ensemble dimension");
  Index best = 0;
  double bestDot = ens.bin(0).dot(v);
  for (Index i = 1; i < ens.bins(); ++i) {
    const double p = ens.bin(i).dot(v);
    if (p < bestDot) {
      bestDot = p;
      best = i;
    }
  }
  return best;
}

/// The member of {i, j} with the smaller inner product against v.
template <typename Derived>
Index bestOfPair(const Eigen::MatrixBase<Derived>& v, const BinEnsemble& ens,
                 BinPair pair) {
  auto [lo, hi] = pair;
  if (hi < lo) std::swap(lo, hi);
  return ens.bin(lo).dot(v) <= ens.bin(hi).dot(v) ? lo : hi;
}

/// Uniform unordered pair of distinct bins (two draws; none when k = 2,
/// where the pair is forced), then the better of the two.
template <typename Derived>
Assignment assignBestOfTwo(const Eigen::MatrixBase<Derived>& v,
                           const BinEnsemble& ens, CounterRng& rng) {
  if (v.size() != ens.dim())
    throw UsageError("vector length does not match ensemble dimension");
  const auto k = static_cast<std::size_t>(ens.bins());
  BinPair pair{0, 1};
  if (k > 2) {
    auto i = static_cast<Index>(rng.index(k));
    auto j = static_cast<Index>(rng.index(k - 1));
    if (j >= i) ++j;
    pair = std::minmax(i, j);
  }
  return {bestOfPair(v, ens, pair), pair};
}

template <typename Derived>
Assignment assign(StrategyKind kind, const Eigen::MatrixBase<Derived>& v,
                  const BinEnsemble& ens, CounterRng& rng) {
  switch (kind) {
  case StrategyKind::UniformRandom: return {assignUniformRandom(v, ens, rng), {}};
  case StrategyKind::Greedy1D: return {assignGreedy1D(v, ens), {}};
  case StrategyKind::InnerProduct: return {assignInnerProduct(v, ens), {}};
  case StrategyKind::BestOfTwo: return assignBestOfTwo(v, ens, rng);
  }
  return {};
}

} // namespace vecbal
