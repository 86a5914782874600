#pragma once

// Growth-law fits of D(T) and quantile aggregation across trials.
// log is the natural logarithm throughout.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vecbal/engine.hpp"

namespace vecbal {

enum class GrowthModel { Const, SqrtLogOverLogLog, SqrtLog, Log, SqrtTLogT };

inline const std::vector<GrowthModel>& allGrowthModels() {
  static const std::vector<GrowthModel> models{
      GrowthModel::Const, GrowthModel::SqrtLogOverLogLog, GrowthModel::SqrtLog,
      GrowthModel::Log, GrowthModel::SqrtTLogT};
  return models;
}

std::string toString(GrowthModel m);

/// g(T) for T >= 3: 1, sqrt(log T / log log T), sqrt(log T), log T, sqrt(T log T).
double growth(GrowthModel m, double T);

using Series = std::vector<std::pair<double, double>>; // (T, D)

struct ModelFit {
  GrowthModel model;
  double slope = 0.0;
  double relativeResidual = 0.0; // RMS error / RMS of D
};

struct FitReport {
  std::vector<ModelFit> perModel;
  GrowthModel bestModel = GrowthModel::Const;
  Series ratioSeries; // (T, D / g_best(T))
};

/// No-intercept least squares D ~ a g(T) per model; best = min residual.
FitReport fitScaling(const Series& series,
                     const std::vector<GrowthModel>& models = allGrowthModels());

struct RatioStability {
  double maxRatio = 0.0;
  double minRatio = 0.0;
  std::optional<double> spread; // max / min; absent when min == 0
};

RatioStability ratioStability(const Series& series, GrowthModel model);

struct QuantileTable {
  std::vector<std::int64_t> times;
  std::vector<double> q;
  std::vector<std::vector<double>> D; // D[iq][checkpoint]
};

/// Nearest-rank quantile of values (copied and sorted): element ceil(q N),
/// with q = 0 giving the minimum.
double nearestRankQuantile(std::vector<double> values, double q);

/// Quantiles of D across trials at each checkpoint. All records must share a
/// schedule.
QuantileTable aggregateQuantiles(const std::vector<TrialRecord>& records,
                                 const std::vector<double>& q);

/// (n, median D) across trials.
Series medianSeries(const std::vector<TrialRecord>& records);

/// Restricts a series to T in [lo, hi].
Series window(const Series& series, double lo, double hi);

} // namespace vecbal
