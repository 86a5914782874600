// vecbal: run online vector-balancing experiments from a JSON config.
//
// Exit codes: 0 success, 1 invariant failure, 2 usage or config error.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "vecbal/config.hpp"
#include "vecbal/verify.hpp"

using namespace vecbal;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitUsage = 2;

void writeText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

/// records.csv -> records.g3.csv when a sweep has several groups.
std::string groupPath(const std::string& path, std::size_t group, std::size_t groups) {
  if (groups <= 1 || path.empty() || path == "-") return path;
  std::filesystem::path p(path);
  const auto stem = p.stem().string() + ".g" + std::to_string(group);
  return (p.parent_path() / (stem + p.extension().string())).string();
}

int simulate(const std::string& configPath, const std::string& outPath, std::uint64_t trial) {
  const auto config = loadConfig(configPath);
  const auto groups = expandGroups(config);
  if (groups.size() != 1)
    throw UsageError("simulate needs a single grid point; use sweep for axes");
  TrialConfig t = groups.front().base;
  t.trialIndex = trial;
  const auto record = runTrial(t, runOptionsFromEnvironment());
  writeText(outPath.empty() ? config.output.records : outPath, recordsCsv({record}));
  return kExitOk;
}

int sweep(const std::string& configPath, int parallelismOverride) {
  const auto config = loadConfig(configPath);
  const auto groups = expandGroups(config);
  const int parallelism = parallelismOverride > 0 ? parallelismOverride : config.parallelism;
  const auto options = runOptionsFromEnvironment();

  std::vector<TrialConfig> grid;
  for (const auto& g : groups) grid.insert(grid.end(), g.trials.begin(), g.trials.end());
  auto flat = runSweep(grid, parallelism, options);

  std::vector<std::vector<TrialRecord>> results;
  std::size_t at = 0;
  for (const auto& g : groups) {
    results.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(at),
                         flat.begin() + static_cast<std::ptrdiff_t>(at + g.trials.size()));
    at += g.trials.size();
  }

  if (!config.output.records.empty())
    for (std::size_t g = 0; g < groups.size(); ++g)
      writeText(groupPath(config.output.records, g, groups.size()), recordsCsv(results[g]));
  const auto summary = summaryJson(config, groups, results);
  writeText(config.output.summary, summary);
  return kExitOk;
}

int drift(const std::string& configPath) {
  const auto config = loadConfig(configPath);
  if (!config.drift) throw ValidationError("drift", "drift command needs a 'drift' section");
  const auto groups = expandGroups(config);
  if (groups.size() != 1) throw UsageError("drift needs a single grid point");

  DriftProbeConfig probe;
  probe.trial = groups.front().base;
  probe.pair = config.drift->pair;
  probe.buckets = config.drift->buckets;
  probe.burnIn = config.drift->burnIn;
  probe.nSteps = config.drift->nSteps;
  probe.start.initialSums = config.drift->initialSums;
  probe.start.restartOnExit = config.drift->restartOnExit;
  writeText(config.output.summary, driftJson(probe, runDriftProbe(probe)));
  return kExitOk;
}

int omegaTable(const std::string& configPath, const std::string& kind, double exponent,
               int sCap, const std::string& outPath) {
  OmegaSpec omega;
  std::string target = outPath;
  if (!configPath.empty()) {
    const auto config = loadConfig(configPath);
    if (config.distribution.size() != 1)
      throw UsageError("omega-table needs a single distribution");
    const auto* p = std::get_if<PathologicalOmega>(&config.distribution.front().v);
    if (!p) throw ValidationError("distribution.variant", "omega-table needs pathological-omega");
    omega = p->omega;
    if (sCap <= 0) sCap = p->sCap;
    if (target.empty()) target = config.output.omegaTable;
  } else {
    omega.kind = omegaKindFromString(kind);
    omega.exponent = exponent;
    omega.validate();
  }
  if (sCap <= 0) sCap = kDefaultSCap;
  writeText(target, omegaTableCsv(buildLengthScales(omega, sCap)));
  return kExitOk;
}

int verify(const std::string& goldenDir) {
  VerifyOptions options;
  if (!goldenDir.empty()) options.goldenDir = goldenDir;
  bool ok = true;
  for (const auto& r : runInvariantSuite(options)) {
    std::cout << (r.pass ? "PASS  " : "FAIL  ") << r.name;
    if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
    std::cout << '\n';
    ok = ok && r.pass;
  }
  return ok ? kExitOk : kExitInvariant;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online vector balancing: strategies, trials and growth-law checks"};
  app.require_subcommand(1);

  std::string configPath, outPath, goldenDir, omegaKind = "identity";
  std::uint64_t trial = 0;
  int parallelism = 0, sCap = 0;
  double exponent = 1.0;

  auto* sim = app.add_subcommand("simulate", "Run one trial, write its records CSV");
  sim->add_option("config", configPath, "Experiment config (JSON)")->required();
  sim->add_option("-o,--out", outPath, "Records CSV path (default: output.records or stdout)");
  sim->add_option("--trial", trial, "Trial index");

  auto* sw = app.add_subcommand("sweep", "Run every grid point, write records and summary");
  sw->add_option("config", configPath, "Experiment config (JSON)")->required();
  sw->add_option("-j,--parallelism", parallelism, "Override config parallelism");

  auto* dr = app.add_subcommand("drift", "Conditional drift of a pair imbalance");
  dr->add_option("config", configPath, "Experiment config with a 'drift' section")->required();

  auto* om = app.add_subcommand("omega-table", "Dump the length-scale table L_s, T_s");
  om->add_option("config", configPath, "Config with a pathological-omega distribution");
  om->add_option("--omega", omegaKind, "identity | power | log-power");
  om->add_option("--exponent", exponent, "Exponent for power / log-power");
  om->add_option("--s-cap", sCap, "Largest s");
  om->add_option("-o,--out", outPath, "CSV path (default: stdout)");

  auto* ve = app.add_subcommand("verify", "Deterministic invariant suite");
  ve->add_option("--golden", goldenDir, "Directory holding the golden trajectory files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sim) return simulate(configPath, outPath, trial);
    if (*sw) return sweep(configPath, parallelism);
    if (*dr) return drift(configPath);
    if (*om) return omegaTable(configPath, omegaKind, exponent, sCap, outPath);
    if (*ve) return verify(goldenDir);
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const OmegaDomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvariant;
  }
  return kExitUsage;
}
