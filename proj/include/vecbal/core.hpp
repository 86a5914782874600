#pragma once

// Bin sums and the pairwise observables built from them.
//
// A set of k bin sums in R^d is stored as a d x k matrix whose columns are
// the bins. The free functions below accept any Eigen expression of that
// shape, so they work equally on a BinEnsemble, a raw matrix, or a block.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "vecbal/errors.hpp"

namespace vecbal {

using Vec = Eigen::VectorXd;
using Index = Eigen::Index;

/// k running bin sums with Neumaier-compensated accumulation.
template <typename Scalar>
class BasicBinEnsemble {
public:
  using VectorType = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using MatrixType = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  BasicBinEnsemble(Index d, Index k) {
    if (d < 1) throw UsageError("ensemble dimension must be >= 1");
    if (k < 2) throw UsageError("ensemble needs at least 2 bins");
    reset(MatrixType::Zero(d, k));
  }

  /// Ensemble whose bins start at the given sums (columns), with n = 0.
  explicit BasicBinEnsemble(const MatrixType& initial)
      : BasicBinEnsemble(initial.rows(), initial.cols()) {
    reset(initial);
  }

  void reset(const MatrixType& initial) {
    value_ = initial;
    raw_ = initial;
    comp_ = MatrixType::Zero(initial.rows(), initial.cols());
    n_ = 0;
  }

  Index dim() const noexcept { return value_.rows(); }
  Index bins() const noexcept { return value_.cols(); }
  std::uint64_t steps() const noexcept { return n_; }

  /// Compensated bin sums, one column per bin.
  const MatrixType& sums() const noexcept { return value_; }
  auto bin(Index i) const { return value_.col(i); }

  template <typename Derived>
  void assign(const Eigen::MatrixBase<Derived>& v, Index h) {
    if (v.size() != dim())
      throw UsageError("vector length " + std::to_string(v.size()) +
                       " does not match ensemble dimension " +
                       std::to_string(dim()));
    if (h < 0 || h >= bins())
      throw UsageError("bin index " + std::to_string(h) + " out of range");
    for (Index r = 0; r < dim(); ++r) {
      const Scalar x = v(r);
      Scalar& s = raw_(r, h);
      const Scalar t = s + x;
      if (std::abs(s) >= std::abs(x))
        comp_(r, h) += (s - t) + x;
      else
        comp_(r, h) += (x - t) + s;
      s = t;
      value_(r, h) = s + comp_(r, h);
    }
    ++n_;
  }

private:
  MatrixType value_, raw_, comp_;
  std::uint64_t n_ = 0;
};

using BinEnsemble = BasicBinEnsemble<double>;

/// Returns a copy of `ens` with `v` added to bin `h`.
template <typename Scalar, typename Derived>
BasicBinEnsemble<Scalar> applyAssignment(BasicBinEnsemble<Scalar> ens,
                                         const Eigen::MatrixBase<Derived>& v,
                                         Index h) {
  ens.assign(v, h);
  return ens;
}

namespace detail {
inline void checkPair(Index k, Index i, Index j) {
  if (i < 0 || i >= k || j < 0 || j >= k)
    throw UsageError("bin pair (" + std::to_string(i) + ", " +
                     std::to_string(j) + ") out of range for k = " +
                     std::to_string(k));
  if (i == j) throw UsageError("bin pair must name two distinct bins");
}
} // namespace detail

/// B_i - B_j.
template <typename Derived>
auto pairDelta(const Eigen::MatrixBase<Derived>& sums, Index i, Index j) {
  detail::checkPair(sums.cols(), i, j);
  return (sums.col(i) - sums.col(j)).eval();
}

template <typename Scalar>
auto pairDelta(const BasicBinEnsemble<Scalar>& ens, Index i, Index j) {
  return pairDelta(ens.sums(), i, j);
}

/// k x k matrix holding ||B_i - B_j||^2 above the diagonal, zero elsewhere.
template <typename Derived>
auto pairSquaredDistances(const Eigen::MatrixBase<Derived>& sums) {
  using Scalar = typename Derived::Scalar;
  const Index k = sums.cols();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(k, k);
  for (Index i = 0; i < k; ++i)
    for (Index j = i + 1; j < k; ++j)
      out(i, j) = (sums.col(i) - sums.col(j)).squaredNorm();
  return out;
}

/// S = sum over i < j of ||B_i - B_j||^2.
template <typename Derived>
typename Derived::Scalar observableS(const Eigen::MatrixBase<Derived>& sums) {
  typename Derived::Scalar s(0);
  const Index k = sums.cols();
  for (Index i = 0; i < k; ++i)
    for (Index j = i + 1; j < k; ++j)
      s += (sums.col(i) - sums.col(j)).squaredNorm();
  return s;
}

template <typename Derived>
typename Derived::Scalar
maxPairDistanceSquared(const Eigen::MatrixBase<Derived>& sums) {
  typename Derived::Scalar best(0);
  const Index k = sums.cols();
  for (Index i = 0; i < k; ++i)
    for (Index j = i + 1; j < k; ++j)
      best = std::max(best, (sums.col(i) - sums.col(j)).squaredNorm());
  return best;
}

/// max over unordered pairs of ||B_i - B_j||.
template <typename Derived>
typename Derived::Scalar maxPairDistance(const Eigen::MatrixBase<Derived>& sums) {
  // sqrt is monotone and correctly rounded, so this equals the max of norms.
  return std::sqrt(maxPairDistanceSquared(sums));
}

/// Imbalance between the super-bins A_1 (first floor(k/2) bins) and A_2 (the
/// rest): ||A_1 - A_2|| for even k, ||(1 + 1/k') A_1 - A_2|| for odd k.
template <typename Derived>
typename Derived::Scalar mergedImbalance(const Eigen::MatrixBase<Derived>& sums) {
  using Scalar = typename Derived::Scalar;
  const Index k = sums.cols();
  const Index half = k / 2;
  const auto a1 = sums.leftCols(half).rowwise().sum().eval();
  const auto a2 = sums.rightCols(k - half).rowwise().sum().eval();
  if (k % 2 == 0) return (a1 - a2).norm();
  const Scalar scale = Scalar(1) + Scalar(1) / Scalar(half);
  return (scale * a1 - a2).norm();
}

template <typename Scalar>
Scalar observableS(const BasicBinEnsemble<Scalar>& ens) {
  return observableS(ens.sums());
}
template <typename Scalar>
Scalar maxPairDistance(const BasicBinEnsemble<Scalar>& ens) {
  return maxPairDistance(ens.sums());
}
template <typename Scalar>
Scalar mergedImbalance(const BasicBinEnsemble<Scalar>& ens) {
  return mergedImbalance(ens.sums());
}

template <typename Scalar>
struct PairObservables {
  Scalar maxPairDist{};
  Scalar S{};
  std::optional<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> deltas;
};

template <typename Scalar>
PairObservables<Scalar> pairObservables(const BasicBinEnsemble<Scalar>& ens,
                                        bool withDeltas = false) {
  const auto d2 = pairSquaredDistances(ens.sums());
  PairObservables<Scalar> out;
  out.S = d2.sum();
  out.maxPairDist = std::sqrt(d2.maxCoeff());
  if (withDeltas) out.deltas = d2;
  return out;
}

} // namespace vecbal
