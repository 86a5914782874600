#include "vecbal/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vecbal/errors.hpp"

namespace vecbal {

std::string toString(GrowthModel m) {
  switch (m) {
  case GrowthModel::Const: return "CONST";
  case GrowthModel::SqrtLogOverLogLog: return "SQRT_LOG_OVER_LOGLOG";
  case GrowthModel::SqrtLog: return "SQRT_LOG";
  case GrowthModel::Log: return "LOG";
  case GrowthModel::SqrtTLogT: return "SQRT_T_LOG_T";
  }
  return "?";
}

double growth(GrowthModel m, double T) {
  if (!(T >= 3.0)) throw UsageError("growth models are defined for T >= 3");
  const double lt = std::log(T);
  switch (m) {
  case GrowthModel::Const: return 1.0;
  case GrowthModel::SqrtLogOverLogLog: return std::sqrt(lt / std::log(lt));
  case GrowthModel::SqrtLog: return std::sqrt(lt);
  case GrowthModel::Log: return lt;
  case GrowthModel::SqrtTLogT: return std::sqrt(T * lt);
  }
  return 1.0;
}

FitReport fitScaling(const Series& series, const std::vector<GrowthModel>& models) {
  if (series.size() < 3) throw UsageError("fitScaling needs at least 3 points");
  if (models.empty()) throw UsageError("fitScaling needs at least one model");
  for (const auto& [T, D] : series) {
    if (!(T >= 3.0)) throw UsageError("fitScaling needs every T >= 3");
    if (!(D >= 0.0)) throw UsageError("fitScaling needs every D >= 0");
  }

  double sumD2 = 0.0;
  for (const auto& p : series) sumD2 += p.second * p.second;
  const double n = static_cast<double>(series.size());
  const double rmsD = std::sqrt(sumD2 / n);

  FitReport report;
  double best = std::numeric_limits<double>::infinity();
  for (GrowthModel m : models) {
    double gd = 0.0, gg = 0.0;
    for (const auto& [T, D] : series) {
      const double g = growth(m, T);
      gd += g * D;
      gg += g * g;
    }
    const double a = gd / gg;
    double sse = 0.0;
    for (const auto& [T, D] : series) {
      const double r = D - a * growth(m, T);
      sse += r * r;
    }
    const double rms = std::sqrt(sse / n);
    double rel = 0.0;
    if (rmsD > 0.0)
      rel = rms / rmsD;
    else if (rms > 0.0)
      rel = std::numeric_limits<double>::infinity();
    report.perModel.push_back({m, a, rel});
    if (rel < best) {
      best = rel;
      report.bestModel = m;
    }
  }
  for (const auto& [T, D] : series)
    report.ratioSeries.emplace_back(T, D / growth(report.bestModel, T));
  return report;
}

RatioStability ratioStability(const Series& series, GrowthModel model) {
  if (series.size() < 2) throw UsageError("ratioStability needs at least 2 points");
  RatioStability out;
  out.maxRatio = -std::numeric_limits<double>::infinity();
  out.minRatio = std::numeric_limits<double>::infinity();
  for (const auto& [T, D] : series) {
    const double r = D / growth(model, T);
    out.maxRatio = std::max(out.maxRatio, r);
    out.minRatio = std::min(out.minRatio, r);
  }
  if (out.minRatio > 0.0) out.spread = out.maxRatio / out.minRatio;
  return out;
}

double nearestRankQuantile(std::vector<double> values, double q) {
  if (values.empty()) throw UsageError("quantile of an empty set");
  if (!(q >= 0.0 && q <= 1.0)) throw UsageError("quantile level must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(q * n));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

QuantileTable aggregateQuantiles(const std::vector<TrialRecord>& records,
                                 const std::vector<double>& q) {
  if (records.empty()) throw UsageError("no trial records to aggregate");
  QuantileTable table;
  table.q = q;
  for (const auto& r : records.front().records) table.times.push_back(r.n);
  for (const auto& rec : records) {
    if (rec.records.size() != table.times.size())
      throw UsageError("trial records do not share a checkpoint schedule");
    for (std::size_t c = 0; c < table.times.size(); ++c)
      if (rec.records[c].n != table.times[c])
        throw UsageError("trial records do not share a checkpoint schedule");
  }
  for (double level : q) {
    if (!(level >= 0.0 && level <= 1.0))
      throw UsageError("quantile level must lie in [0, 1]");
    std::vector<double> row;
    for (std::size_t c = 0; c < table.times.size(); ++c) {
      std::vector<double> values;
      values.reserve(records.size());
      for (const auto& rec : records) values.push_back(rec.records[c].D);
      row.push_back(nearestRankQuantile(std::move(values), level));
    }
    table.D.push_back(std::move(row));
  }
  return table;
}

Series medianSeries(const std::vector<TrialRecord>& records) {
  const auto table = aggregateQuantiles(records, {0.5});
  Series s;
  for (std::size_t c = 0; c < table.times.size(); ++c)
    s.emplace_back(static_cast<double>(table.times[c]), table.D[0][c]);
  return s;
}

Series window(const Series& series, double lo, double hi) {
  Series out;
  for (const auto& p : series)
    if (p.first >= lo && p.first <= hi) out.push_back(p);
  return out;
}

} // namespace vecbal
