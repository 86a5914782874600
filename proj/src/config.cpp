#include "vecbal/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace vecbal {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

void rejectUnknownKeys(const json& obj, const std::string& path,
                       std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || item.key() == a;
    if (!ok)
      throw ValidationError(path.empty() ? item.key() : path + "." + item.key(),
                            "unknown key");
  }
}

const json& requireObject(const json& j, const std::string& field) {
  if (!j.is_object()) throw ValidationError(field, "must be an object");
  return j;
}

double asReal(const json& j, const std::string& field) {
  if (!j.is_number()) throw ValidationError(field, "must be a number");
  return j.get<double>();
}

std::int64_t asInt(const json& j, const std::string& field) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) {
    const double x = j.get<double>();
    if (std::isfinite(x) && std::floor(x) == x && std::abs(x) < 9.0e18)
      return static_cast<std::int64_t>(x);
  }
  throw ValidationError(field, "must be an integer");
}

template <typename T, typename F>
std::vector<T> asAxis(const json& j, const std::string& field, F&& one) {
  std::vector<T> out;
  if (j.is_array()) {
    if (j.empty()) throw ValidationError(field, "axis must not be empty");
    for (std::size_t i = 0; i < j.size(); ++i)
      out.push_back(one(j[i], field + "[" + std::to_string(i) + "]"));
  } else {
    out.push_back(one(j, field));
  }
  return out;
}

Vec asVec(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty())
    throw ValidationError(field, "must be a non-empty array of coordinates");
  Vec v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Index>(i)) = asReal(j[i], field);
  return v;
}

OmegaSpec parseOmega(const json& j, const std::string& field) {
  requireObject(j, field);
  rejectUnknownKeys(j, field, {"kind", "exponent", "points"});
  if (!j.contains("kind") || !j["kind"].is_string())
    throw ValidationError(field + ".kind", "required string");
  OmegaSpec o;
  try {
    o.kind = omegaKindFromString(j["kind"].get<std::string>());
  } catch (const ValidationError& e) {
    throw ValidationError(field + ".kind", e.what());
  }
  if (j.contains("exponent")) {
    if (o.kind != OmegaKind::Power && o.kind != OmegaKind::LogPower)
      throw ValidationError(field + ".exponent", "only valid for power and log-power");
    o.exponent = asReal(j["exponent"], field + ".exponent");
  } else if (o.kind == OmegaKind::Power || o.kind == OmegaKind::LogPower) {
    throw ValidationError(field + ".exponent", "required for " + toString(o.kind));
  }
  if (j.contains("points")) {
    if (o.kind != OmegaKind::Table)
      throw ValidationError(field + ".points", "only valid for table");
    const auto& pts = j["points"];
    if (!pts.is_array()) throw ValidationError(field + ".points", "must be an array");
    for (const auto& p : pts) {
      if (!p.is_array() || p.size() != 2)
        throw ValidationError(field + ".points", "each point must be [x, y]");
      o.table.emplace_back(asReal(p[0], field + ".points"), asReal(p[1], field + ".points"));
    }
  } else if (o.kind == OmegaKind::Table) {
    throw ValidationError(field + ".points", "required for table");
  }
  try {
    o.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(field + e.field().substr(std::string("omega").size()), e.what());
  }
  return o;
}

DistributionSpec parseDistribution(const json& j, const std::string& field) {
  requireObject(j, field);
  if (!j.contains("variant") || !j["variant"].is_string())
    throw ValidationError(field + ".variant", "required string");
  const auto variant = j["variant"].get<std::string>();
  DistributionSpec spec;
  if (variant == "uniform-ball") {
    rejectUnknownKeys(j, field, {"variant", "d"});
    UniformBall b;
    if (j.contains("d")) {
      b.d = static_cast<int>(asInt(j["d"], field + ".d"));
      if (b.d < 1) throw ValidationError(field + ".d", "must be >= 1");
    }
    spec = b;
  } else if (variant == "atomic") {
    rejectUnknownKeys(j, field, {"variant", "atoms", "weights"});
    if (!j.contains("atoms") || !j["atoms"].is_array())
      throw ValidationError(field + ".atoms", "required array of atoms");
    Atomic a;
    for (std::size_t i = 0; i < j["atoms"].size(); ++i)
      a.atoms.push_back(asVec(j["atoms"][i], field + ".atoms[" + std::to_string(i) + "]"));
    if (j.contains("weights")) {
      if (!j["weights"].is_array())
        throw ValidationError(field + ".weights", "must be an array");
      for (const auto& w : j["weights"]) a.weights.push_back(asReal(w, field + ".weights"));
    } else {
      a.weights.assign(a.atoms.size(), 1.0 / static_cast<double>(a.atoms.size()));
    }
    spec = a;
  } else if (variant == "mixture") {
    rejectUnknownKeys(j, field, {"variant", "components"});
    if (!j.contains("components") || !j["components"].is_array())
      throw ValidationError(field + ".components", "required array");
    Mixture m;
    for (std::size_t i = 0; i < j["components"].size(); ++i) {
      const std::string cf = field + ".components[" + std::to_string(i) + "]";
      const auto& c = requireObject(j["components"][i], cf);
      rejectUnknownKeys(c, cf, {"weight", "distribution"});
      if (!c.contains("weight") || !c.contains("distribution"))
        throw ValidationError(cf, "needs weight and distribution");
      m.components.push_back({asReal(c["weight"], cf + ".weight"),
                              parseDistribution(c["distribution"], cf + ".distribution")});
    }
    spec = m;
  } else if (variant == "pathological-omega") {
    rejectUnknownKeys(j, field, {"variant", "omega", "sCap"});
    PathologicalOmega p;
    if (!j.contains("omega")) throw ValidationError(field + ".omega", "required");
    p.omega = parseOmega(j["omega"], field + ".omega");
    if (j.contains("sCap")) p.sCap = static_cast<int>(asInt(j["sCap"], field + ".sCap"));
    spec = p;
  } else {
    throw ValidationError(field + ".variant",
                          "unknown variant '" + variant +
                              "' (uniform-ball|atomic|mixture|pathological-omega)");
  }
  spec.validate(field);
  return spec;
}

json omegaToJson(const OmegaSpec& o) {
  json j;
  j["kind"] = toString(o.kind);
  if (o.kind == OmegaKind::Power || o.kind == OmegaKind::LogPower) j["exponent"] = o.exponent;
  if (o.kind == OmegaKind::Table) {
    j["points"] = json::array();
    for (const auto& [x, y] : o.table) j["points"].push_back({x, y});
  }
  return j;
}

json distributionToJson(const DistributionSpec& spec) {
  json j;
  j["variant"] = variantName(spec);
  std::visit(
      [&](const auto& alt) {
        using T = std::decay_t<decltype(alt)>;
        if constexpr (std::is_same_v<T, UniformBall>) {
          if (alt.d > 0) j["d"] = alt.d;
        } else if constexpr (std::is_same_v<T, Atomic>) {
          j["atoms"] = json::array();
          for (const auto& a : alt.atoms)
            j["atoms"].push_back(std::vector<double>(a.data(), a.data() + a.size()));
          j["weights"] = alt.weights;
        } else if constexpr (std::is_same_v<T, Mixture>) {
          j["components"] = json::array();
          for (const auto& c : alt.components)
            j["components"].push_back(
                {{"weight", c.weight}, {"distribution", distributionToJson(c.spec)}});
        } else {
          j["omega"] = omegaToJson(alt.omega);
          j["sCap"] = alt.sCap;
        }
      },
      spec.v);
  return j;
}

DriftSpec parseDrift(const json& j) {
  requireObject(j, "drift");
  rejectUnknownKeys(j, "drift",
                    {"pair", "buckets", "burnIn", "nSteps", "initialSums", "restartOnExit"});
  DriftSpec s;
  if (j.contains("pair")) {
    const auto& p = j["pair"];
    if (!p.is_array() || p.size() != 2)
      throw ValidationError("drift.pair", "must be [i, j] (1-based)");
    s.pair = {asInt(p[0], "drift.pair") - 1, asInt(p[1], "drift.pair") - 1};
  }
  if (!j.contains("buckets") || !j["buckets"].is_array() || j["buckets"].empty())
    throw ValidationError("drift.buckets", "required non-empty array of [low, high]");
  for (const auto& b : j["buckets"]) {
    if (!b.is_array() || b.size() != 2)
      throw ValidationError("drift.buckets", "each bucket must be [low, high]");
    s.buckets.push_back({asReal(b[0], "drift.buckets"), asReal(b[1], "drift.buckets")});
  }
  if (j.contains("burnIn")) s.burnIn = asInt(j["burnIn"], "drift.burnIn");
  if (j.contains("nSteps")) s.nSteps = asInt(j["nSteps"], "drift.nSteps");
  if (s.nSteps < 1) throw ValidationError("drift.nSteps", "must be >= 1");
  if (j.contains("initialSums")) {
    const auto& m = j["initialSums"];
    if (!m.is_array() || m.empty())
      throw ValidationError("drift.initialSums", "must be an array of k bin vectors");
    std::vector<Vec> cols;
    for (std::size_t i = 0; i < m.size(); ++i)
      cols.push_back(asVec(m[i], "drift.initialSums[" + std::to_string(i) + "]"));
    Eigen::MatrixXd sums(cols.front().size(), static_cast<Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (cols[i].size() != sums.rows())
        throw ValidationError("drift.initialSums", "bin vectors differ in length");
      sums.col(static_cast<Index>(i)) = cols[i];
    }
    s.initialSums = sums;
  }
  if (j.contains("restartOnExit")) {
    if (!j["restartOnExit"].is_boolean())
      throw ValidationError("drift.restartOnExit", "must be a boolean");
    s.restartOnExit = j["restartOnExit"].get<bool>();
  }
  return s;
}

std::pair<std::size_t, std::size_t> lineColumn(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

template <typename T>
json axisToJson(const std::vector<T>& v) {
  if (v.size() == 1) return json(v.front());
  return json(v);
}

ojson estimateJson(const DriftEstimate& e) {
  ojson j;
  j["bucketLow"] = e.bucketLow;
  j["bucketHigh"] = e.bucketHigh;
  j["count"] = e.count;
  if (e.meanDelta) {
    j["meanDelta"] = *e.meanDelta;
    j["stdErr"] = e.stdErr;
  } else {
    j["meanDelta"] = nullptr;
    j["stdErr"] = nullptr;
  }
  j["maxAbsDelta"] = e.maxAbsDelta;
  return j;
}

ojson estimatesJson(const std::vector<DriftEstimate>& es) {
  ojson a = ojson::array();
  for (const auto& e : es) a.push_back(estimateJson(e));
  return a;
}

} // namespace

bool operator==(const DriftSpec& a, const DriftSpec& b) {
  if (a.pair != b.pair || a.burnIn != b.burnIn || a.nSteps != b.nSteps ||
      a.restartOnExit != b.restartOnExit || a.buckets.size() != b.buckets.size())
    return false;
  for (std::size_t i = 0; i < a.buckets.size(); ++i)
    if (a.buckets[i].low != b.buckets[i].low || a.buckets[i].high != b.buckets[i].high)
      return false;
  if (a.initialSums.has_value() != b.initialSums.has_value()) return false;
  if (!a.initialSums) return true;
  return a.initialSums->rows() == b.initialSums->rows() &&
         a.initialSums->cols() == b.initialSums->cols() && *a.initialSums == *b.initialSums;
}

ExperimentConfig parseConfig(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = lineColumn(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError(line, col, e.what());
  }
  requireObject(root, "config");
  rejectUnknownKeys(root, "",
                    {"d", "k", "T", "strategy", "distribution", "checkpoints", "masterSeed",
                     "trials", "parallelism", "output", "quantiles", "drift"});
  for (const char* required : {"d", "k", "T", "strategy", "distribution"})
    if (!root.contains(required)) throw ValidationError(required, "required key is missing");

  ExperimentConfig c;
  c.d = asAxis<int>(root["d"], "d", [](const json& j, const std::string& f) {
    const auto v = asInt(j, f);
    if (v < 1) throw ValidationError(f, "must be >= 1");
    return static_cast<int>(v);
  });
  c.k = asAxis<int>(root["k"], "k", [](const json& j, const std::string& f) {
    const auto v = asInt(j, f);
    if (v < 2) throw ValidationError(f, "must be >= 2");
    return static_cast<int>(v);
  });
  c.T = asAxis<std::int64_t>(root["T"], "T", [](const json& j, const std::string& f) {
    const auto v = asInt(j, f);
    if (v < 1) throw ValidationError(f, "must be >= 1");
    return v;
  });
  c.strategy = asAxis<StrategyKind>(root["strategy"], "strategy",
                                    [](const json& j, const std::string& f) {
                                      if (!j.is_string()) throw ValidationError(f, "must be a string");
                                      try {
                                        return strategyFromString(j.get<std::string>());
                                      } catch (const ValidationError& e) {
                                        throw ValidationError(f, e.what());
                                      }
                                    });
  c.distribution = asAxis<DistributionSpec>(root["distribution"], "distribution",
                                            parseDistribution);

  if (root.contains("checkpoints")) {
    const auto& cp = requireObject(root["checkpoints"], "checkpoints");
    rejectUnknownKeys(cp, "checkpoints", {"tMin", "tMax", "ratio"});
    if (cp.contains("tMin")) c.checkpoints.tMin = asInt(cp["tMin"], "checkpoints.tMin");
    if (cp.contains("tMax")) c.checkpoints.tMax = asInt(cp["tMax"], "checkpoints.tMax");
    if (cp.contains("ratio")) c.checkpoints.ratio = asReal(cp["ratio"], "checkpoints.ratio");
    if (c.checkpoints.tMin < 1) throw ValidationError("checkpoints.tMin", "must be >= 1");
    if (!(c.checkpoints.ratio > 1.0)) throw ValidationError("checkpoints.ratio", "must be > 1");
  }
  if (root.contains("masterSeed")) {
    const auto& s = root["masterSeed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0))
      throw ValidationError("masterSeed", "must be a non-negative 64-bit integer");
    c.masterSeed = s.get<std::uint64_t>();
  }
  if (root.contains("trials")) {
    c.trials = static_cast<int>(asInt(root["trials"], "trials"));
    if (c.trials < 1) throw ValidationError("trials", "must be >= 1");
  }
  if (root.contains("parallelism")) {
    c.parallelism = static_cast<int>(asInt(root["parallelism"], "parallelism"));
    if (c.parallelism < 1) throw ValidationError("parallelism", "must be >= 1");
  }
  if (root.contains("output")) {
    const auto& o = requireObject(root["output"], "output");
    rejectUnknownKeys(o, "output", {"records", "summary", "omegaTable"});
    auto str = [&](const char* key, std::string& dst) {
      if (!o.contains(key)) return;
      if (!o[key].is_string()) throw ValidationError(std::string("output.") + key, "must be a string");
      dst = o[key].get<std::string>();
    };
    str("records", c.output.records);
    str("summary", c.output.summary);
    str("omegaTable", c.output.omegaTable);
  }
  if (root.contains("quantiles")) {
    const auto& q = root["quantiles"];
    if (!q.is_array() || q.empty()) throw ValidationError("quantiles", "must be a non-empty array");
    c.quantiles.clear();
    for (const auto& x : q) {
      const double level = asReal(x, "quantiles");
      if (!(level >= 0.0 && level <= 1.0))
        throw ValidationError("quantiles", "levels must lie in [0, 1]");
      c.quantiles.push_back(level);
    }
  }
  if (root.contains("drift")) c.drift = parseDrift(root["drift"]);

  expandGroups(c); // full semantic validation of every grid point
  if (c.drift) {
    for (int k : c.k) {
      if (c.drift->pair.first < 0 || c.drift->pair.first >= k ||
          c.drift->pair.second < 0 || c.drift->pair.second >= k ||
          c.drift->pair.first == c.drift->pair.second)
        throw ValidationError("drift.pair", "must name two distinct bins in 1..k");
      if (c.drift->initialSums && c.drift->initialSums->cols() != k)
        throw ValidationError("drift.initialSums", "must list exactly k bin vectors");
    }
    for (int d : c.d)
      if (c.drift->initialSums && c.drift->initialSums->rows() != d)
        throw ValidationError("drift.initialSums", "bin vectors must have length d");
  }
  return c;
}

ExperimentConfig loadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parseConfig(buf.str());
}

std::string serializeConfig(const ExperimentConfig& c) {
  json j;
  j["d"] = axisToJson(c.d);
  j["k"] = axisToJson(c.k);
  j["T"] = axisToJson(c.T);
  std::vector<std::string> strategies;
  for (auto s : c.strategy) strategies.push_back(toString(s));
  j["strategy"] = axisToJson(strategies);
  if (c.distribution.size() == 1) {
    j["distribution"] = distributionToJson(c.distribution.front());
  } else {
    j["distribution"] = json::array();
    for (const auto& d : c.distribution) j["distribution"].push_back(distributionToJson(d));
  }
  j["checkpoints"] = {{"tMin", c.checkpoints.tMin}, {"ratio", c.checkpoints.ratio}};
  if (c.checkpoints.tMax) j["checkpoints"]["tMax"] = *c.checkpoints.tMax;
  j["masterSeed"] = c.masterSeed;
  j["trials"] = c.trials;
  j["parallelism"] = c.parallelism;
  j["output"] = json::object();
  if (!c.output.records.empty()) j["output"]["records"] = c.output.records;
  if (!c.output.summary.empty()) j["output"]["summary"] = c.output.summary;
  if (!c.output.omegaTable.empty()) j["output"]["omegaTable"] = c.output.omegaTable;
  j["quantiles"] = c.quantiles;
  if (c.drift) {
    const auto& s = *c.drift;
    json dj;
    dj["pair"] = {s.pair.first + 1, s.pair.second + 1};
    dj["buckets"] = json::array();
    for (const auto& b : s.buckets) dj["buckets"].push_back({b.low, b.high});
    dj["burnIn"] = s.burnIn;
    dj["nSteps"] = s.nSteps;
    if (s.initialSums) {
      dj["initialSums"] = json::array();
      for (Index i = 0; i < s.initialSums->cols(); ++i) {
        const Vec col = s.initialSums->col(i);
        dj["initialSums"].push_back(std::vector<double>(col.data(), col.data() + col.size()));
      }
    }
    dj["restartOnExit"] = s.restartOnExit;
    j["drift"] = dj;
  }
  return j.dump(2) + "\n";
}

std::vector<TrialGroup> expandGroups(const ExperimentConfig& c) {
  std::vector<TrialGroup> groups;
  for (int d : c.d)
    for (int k : c.k)
      for (std::int64_t T : c.T)
        for (StrategyKind s : c.strategy)
          for (const auto& dist : c.distribution) {
            TrialConfig t;
            t.d = d;
            t.k = k;
            t.T = T;
            t.strategy = s;
            t.distribution = dist.bound(d);
            const std::int64_t tMax = c.checkpoints.tMax.value_or(T);
            if (tMax > T) throw ValidationError("checkpoints.tMax", "exceeds T");
            try {
              t.checkpoints = checkpointSchedule(std::min(c.checkpoints.tMin, tMax), tMax,
                                                 c.checkpoints.ratio);
            } catch (const UsageError& e) {
              throw ValidationError("checkpoints", e.what());
            }
            t.masterSeed = c.masterSeed;
            t.validate();
            TrialGroup g;
            g.base = t;
            for (int i = 0; i < c.trials; ++i) {
              t.trialIndex = static_cast<std::uint64_t>(i);
              g.trials.push_back(t);
            }
            groups.push_back(std::move(g));
          }
  return groups;
}

// ---------------------------------------------------------------------------

std::string formatReal(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string hex64(std::uint64_t x) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

void writeRecordsCsv(std::ostream& os, const std::vector<TrialRecord>& records) {
  os << kRecordsCsvHeader << '\n';
  for (const auto& t : records)
    for (const auto& r : t.records)
      os << t.trialIndex << ',' << t.seed << ',' << r.n << ',' << formatReal(r.D) << ','
         << formatReal(r.S) << ',' << formatReal(r.curMaxPair) << ','
         << formatReal(r.mergedImb) << '\n';
}

std::string recordsCsv(const std::vector<TrialRecord>& records) {
  std::ostringstream os;
  writeRecordsCsv(os, records);
  return os.str();
}

std::string summaryJson(const ExperimentConfig& config, const std::vector<TrialGroup>& groups,
                        const std::vector<std::vector<TrialRecord>>& results) {
  ojson root;
  root["configDigest"] = hex64(fnv1a64(serializeConfig(config)));
  root["groups"] = ojson::array();
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& base = groups[g].base;
    ojson gj;
    gj["index"] = g;
    gj["digest"] = hex64(configDigest(base));
    gj["d"] = base.d;
    gj["k"] = base.k;
    gj["T"] = base.T;
    gj["strategy"] = toString(base.strategy);
    gj["distribution"] = ojson::parse(distributionToJson(base.distribution).dump());
    gj["trials"] = results[g].size();

    const auto table = aggregateQuantiles(results[g], config.quantiles);
    gj["checkpoints"] = table.times;
    ojson qj;
    qj["levels"] = table.q;
    qj["D"] = table.D;
    gj["quantiles"] = qj;

    const Series fitInput = window(medianSeries(results[g]), 3.0, 1e300);
    if (fitInput.size() >= 3) {
      const FitReport fit = fitScaling(fitInput);
      ojson fj;
      fj["bestModel"] = toString(fit.bestModel);
      fj["perModel"] = ojson::array();
      for (const auto& m : fit.perModel)
        fj["perModel"].push_back({{"model", toString(m.model)},
                                  {"slope", m.slope},
                                  {"relativeResidual", m.relativeResidual}});
      fj["ratioSeries"] = ojson::array();
      for (const auto& [T, r] : fit.ratioSeries) fj["ratioSeries"].push_back({T, r});
      gj["fit"] = fj;
    } else {
      gj["fit"] = nullptr;
    }
    root["groups"].push_back(gj);
  }
  return root.dump(2) + "\n";
}

std::string driftJson(const DriftProbeConfig& probe, const DriftProbeResult& r) {
  ojson j;
  j["digest"] = hex64(configDigest(probe.trial));
  j["pair"] = {probe.pair.first + 1, probe.pair.second + 1};
  j["simulatedSteps"] = r.simulatedSteps;
  j["recordedSteps"] = r.recordedSteps;
  j["restarts"] = r.restarts;
  j["overall"] = estimatesJson(r.overall);
  if (r.eventsAvailable) {
    j["bothChosen"] = estimatesJson(r.bothChosen);
    j["neitherChosen"] = estimatesJson(r.neitherChosen);
    j["oneChosen"] = estimatesJson(r.oneChosen);
  }
  return j.dump(2) + "\n";
}

std::string omegaTableCsv(const LengthScaleTable& table) {
  std::ostringstream os;
  os << "s,L_s,T_s,tail_mass\n";
  for (const auto& e : table.entries)
    os << e.s << ',' << formatReal(e.L) << ',' << (e.saturated ? "overflow" : formatReal(e.T))
       << ',' << formatReal(table.tailMass) << '\n';
  return os.str();
}

} // namespace vecbal
