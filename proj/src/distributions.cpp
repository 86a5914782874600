#include "vecbal/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace vecbal {

namespace {

constexpr double kWeightSumTol = 1e-12;
constexpr double kNormTol = 1e-12;

double baselConstant() { return 6.0 / (std::numbers::pi * std::numbers::pi); }

void checkWeights(const std::vector<double>& w, const std::string& field) {
  if (w.empty()) throw ValidationError(field, "needs at least one weight");
  double total = 0.0;
  for (double x : w) {
    if (!(x > 0.0) || !std::isfinite(x))
      throw ValidationError(field, "weights must be positive and finite");
    total += x;
  }
  if (std::abs(total - 1.0) > kWeightSumTol)
    throw ValidationError(field, "weights must sum to 1 (got " +
                                     std::to_string(total) + ")");
}

std::vector<double> cumulative(const std::vector<double>& w) {
  std::vector<double> c(w.size());
  std::partial_sum(w.begin(), w.end(), c.begin());
  return c;
}

} // namespace

// ---------------------------------------------------------------------------
// omega

std::string toString(OmegaKind kind) {
  switch (kind) {
  case OmegaKind::Identity: return "identity";
  case OmegaKind::Power: return "power";
  case OmegaKind::LogPower: return "log-power";
  case OmegaKind::Table: return "table";
  }
  return "?";
}

OmegaKind omegaKindFromString(const std::string& name) {
  if (name == "identity") return OmegaKind::Identity;
  if (name == "power") return OmegaKind::Power;
  if (name == "log-power") return OmegaKind::LogPower;
  if (name == "table") return OmegaKind::Table;
  throw ValidationError("omega.kind", "unknown omega kind '" + name +
                                          "' (identity|power|log-power|table)");
}

void OmegaSpec::validate() const {
  switch (kind) {
  case OmegaKind::Identity: return;
  case OmegaKind::Power:
  case OmegaKind::LogPower:
    if (!(exponent > 0.0) || !std::isfinite(exponent))
      throw ValidationError("omega.exponent", "must be positive and finite");
    return;
  case OmegaKind::Table:
    if (table.empty()) throw ValidationError("omega.points", "table is empty");
    for (std::size_t i = 0; i < table.size(); ++i) {
      const auto [x, y] = table[i];
      if (!(x > 0.0) || !std::isfinite(x) || !(y > 0.0) || !std::isfinite(y))
        throw ValidationError("omega.points",
                              "breakpoints must be positive and finite");
      if (i > 0 && !(x > table[i - 1].first))
        throw ValidationError("omega.points", "x must be strictly increasing");
      if (i > 0 && y < table[i - 1].second)
        throw ValidationError("omega.points", "y must be nondecreasing");
    }
    return;
  }
}

double OmegaSpec::operator()(double x) const {
  switch (kind) {
  case OmegaKind::Identity: return x;
  case OmegaKind::Power: return std::pow(x, exponent);
  case OmegaKind::LogPower: return std::pow(std::log1p(x), exponent);
  case OmegaKind::Table: {
    if (x > table.back().first)
      throw OmegaDomainError("omega domain too small: queried at " +
                             std::to_string(x) + " beyond last breakpoint " +
                             std::to_string(table.back().first));
    if (x <= table.front().first) return table.front().second;
    auto hi = std::lower_bound(
        table.begin(), table.end(), x,
        [](const std::pair<double, double>& p, double v) { return p.first < v; });
    auto lo = hi - 1;
    const double t = (x - lo->first) / (hi->first - lo->first);
    return lo->second + t * (hi->second - lo->second);
  }
  }
  return x;
}

double baselWeight(int s) {
  return baselConstant() / (static_cast<double>(s) * static_cast<double>(s));
}

LengthScaleTable buildLengthScales(const OmegaSpec& omega, int sCap) {
  if (sCap < 1) throw UsageError("sCap must be >= 1");
  omega.validate();

  LengthScaleTable table;
  table.entries.reserve(static_cast<std::size_t>(sCap));
  double mass = 0.0;
  for (int s = 1; s <= sCap; ++s) {
    const double s2 = static_cast<double>(s) * s;
    const double target = 10.0 * s;
    auto lengthAt = [](std::int64_t j) { return 2.0 + j / 100.0; };
    auto holds = [&](std::int64_t j) {
      const double L = lengthAt(j);
      return omega(std::expm1(s2 * L * L)) >= target;
    };

    std::int64_t j = 0;
    if (!holds(0)) {
      // Doubling then bisection over grid indices; the predicate is monotone.
      std::int64_t lo = 0, hi = 1;
      while (!holds(hi)) {
        lo = hi;
        hi *= 2;
        if (hi > (std::int64_t{1} << 40))
          throw OmegaDomainError("omega never reaches 10 s for s = " +
                                 std::to_string(s));
      }
      while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        (holds(mid) ? hi : lo) = mid;
      }
      j = hi;
    }

    LengthScale e;
    e.s = s;
    e.L = lengthAt(j);
    e.T = std::floor(std::exp(s2 * e.L * e.L));
    e.saturated = std::isinf(e.T);
    table.entries.push_back(e);
    mass += baselWeight(s);
  }
  table.tailMass = std::max(0.0, 1.0 - mass);
  return table;
}

// ---------------------------------------------------------------------------
// specs

bool operator==(const Atomic& a, const Atomic& b) {
  if (a.weights != b.weights || a.atoms.size() != b.atoms.size()) return false;
  for (std::size_t i = 0; i < a.atoms.size(); ++i)
    if (a.atoms[i].size() != b.atoms[i].size() || a.atoms[i] != b.atoms[i])
      return false;
  return true;
}

bool operator==(const Mixture& a, const Mixture& b) {
  return a.components == b.components;
}

int DistributionSpec::dimension() const {
  return std::visit(
      [](const auto& alt) -> int {
        using T = std::decay_t<decltype(alt)>;
        if constexpr (std::is_same_v<T, UniformBall>) {
          return alt.d;
        } else if constexpr (std::is_same_v<T, Atomic>) {
          return alt.atoms.empty() ? 0 : static_cast<int>(alt.atoms.front().size());
        } else if constexpr (std::is_same_v<T, Mixture>) {
          for (const auto& c : alt.components)
            if (int d = c.spec.dimension(); d > 0) return d;
          return 0;
        } else {
          return 2;
        }
      },
      v);
}

void DistributionSpec::validate(const std::string& field) const {
  std::visit(
      [&](const auto& alt) {
        using T = std::decay_t<decltype(alt)>;
        if constexpr (std::is_same_v<T, UniformBall>) {
          if (alt.d < 0) throw ValidationError(field + ".d", "must be >= 1");
        } else if constexpr (std::is_same_v<T, Atomic>) {
          if (alt.atoms.empty())
            throw ValidationError(field + ".atoms", "needs at least one atom");
          if (alt.weights.size() != alt.atoms.size())
            throw ValidationError(field + ".weights",
                                  "count must match the number of atoms");
          checkWeights(alt.weights, field + ".weights");
          const auto d = alt.atoms.front().size();
          if (d < 1) throw ValidationError(field + ".atoms", "atoms are empty");
          for (const auto& a : alt.atoms) {
            if (a.size() != d)
              throw ValidationError(field + ".atoms",
                                    "atoms have inconsistent dimensions");
            if (!a.allFinite() || a.norm() > 1.0 + kNormTol)
              throw ValidationError(field + ".atoms",
                                    "every atom must lie in the unit ball");
          }
        } else if constexpr (std::is_same_v<T, Mixture>) {
          if (alt.components.empty())
            throw ValidationError(field + ".components", "mixture is empty");
          std::vector<double> w;
          int d = 0;
          for (std::size_t i = 0; i < alt.components.size(); ++i) {
            const auto& c = alt.components[i];
            w.push_back(c.weight);
            c.spec.validate(field + ".components[" + std::to_string(i) + "]");
            const int cd = c.spec.dimension();
            if (cd > 0 && d > 0 && cd != d)
              throw ValidationError(field + ".components",
                                    "components have different dimensions");
            if (cd > 0) d = cd;
          }
          checkWeights(w, field + ".components");
        } else {
          if (alt.sCap < 1) throw ValidationError(field + ".sCap", "must be >= 1");
          try {
            alt.omega.validate();
          } catch (const ValidationError& e) {
            throw ValidationError(field + "." + e.field(), e.what());
          }
        }
      },
      v);
}

DistributionSpec DistributionSpec::bound(int d) const {
  DistributionSpec out = *this;
  if (auto* ball = std::get_if<UniformBall>(&out.v)) {
    if (ball->d == 0) ball->d = d;
  } else if (auto* mix = std::get_if<Mixture>(&out.v)) {
    for (auto& c : mix->components) c.spec = c.spec.bound(d);
  }
  return out;
}

DistributionSpec pointMass(const Vec& at) { return Atomic{{at}, {1.0}}; }

std::string variantName(const DistributionSpec& spec) {
  switch (spec.v.index()) {
  case 0: return "uniform-ball";
  case 1: return "atomic";
  case 2: return "mixture";
  default: return "pathological-omega";
  }
}

// ---------------------------------------------------------------------------
// samplers

void sampleUniformBall(int d, CounterRng& rng, Eigen::Ref<Vec> out) {
  if (d < 1) throw UsageError("uniform ball dimension must be >= 1");
  double z0 = 0.0, z1 = 0.0;
  for (int i = 0; i < d; i += 2) {
    rng.gaussianPair(z0, z1);
    out(i) = z0;
    if (i + 1 < d) out(i + 1) = z1;
  }
  const double norm = out.head(d).norm();
  const double radius = std::pow(rng.uniform(), 1.0 / d);
  if (norm == 0.0) {
    out.setZero();
    out(0) = radius;
    return;
  }
  const double scale = radius / norm;
  for (int i = 0; i < d; ++i) out(i) = out(i) * scale;
}

Vec sampleUniformBall(int d, CounterRng& rng) {
  if (d < 1) throw UsageError("uniform ball dimension must be >= 1");
  Vec out(d);
  sampleUniformBall(d, rng, out);
  return out;
}

std::size_t atomIndexForUniform(const std::vector<double>& cumulative, double u) {
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) return cumulative.size() - 1;
  return static_cast<std::size_t>(it - cumulative.begin());
}

int lengthScaleIndexForUniform(double u, int sCap) {
  double cum = 0.0;
  for (int s = 1; s <= sCap; ++s) {
    cum += baselWeight(s);
    if (u < cum) return s;
  }
  return sCap;
}

struct Sampler::Node {
  enum class Kind { Ball, Atoms, Mix, Pathological } kind = Kind::Ball;
  int d = 0;
  Eigen::MatrixXd atoms; // columns
  std::vector<double> cdf;
  std::vector<std::shared_ptr<const Node>> children;
  std::shared_ptr<LengthScaleTable> table;
  int sCap = 0;

  void sample(CounterRng& rng, Eigen::Ref<Vec> out) const {
    switch (kind) {
    case Kind::Ball:
      sampleUniformBall(d, rng, out);
      return;
    case Kind::Atoms:
      out = atoms.col(static_cast<Index>(atomIndexForUniform(cdf, rng.uniform())));
      return;
    case Kind::Mix:
      children[atomIndexForUniform(cdf, rng.uniform())]->sample(rng, out);
      return;
    case Kind::Pathological:
      switch (rng.index(3)) {
      case 0:
        out << 0.0, 0.5;
        return;
      case 1:
        sampleUniformBall(2, rng, out);
        return;
      default:
        out = atoms.col(lengthScaleIndexForUniform(rng.uniform(), sCap) - 1);
        return;
      }
    }
  }
};

namespace {

std::shared_ptr<const Sampler::Node> buildNode(const DistributionSpec& spec) {
  auto node = std::make_shared<Sampler::Node>();
  node->d = spec.dimension();
  std::visit(
      [&](const auto& alt) {
        using T = std::decay_t<decltype(alt)>;
        using Kind = Sampler::Node::Kind;
        if constexpr (std::is_same_v<T, UniformBall>) {
          node->kind = Kind::Ball;
        } else if constexpr (std::is_same_v<T, Atomic>) {
          node->kind = Kind::Atoms;
          node->atoms.resize(node->d, static_cast<Index>(alt.atoms.size()));
          for (std::size_t i = 0; i < alt.atoms.size(); ++i)
            node->atoms.col(static_cast<Index>(i)) = alt.atoms[i];
          node->cdf = cumulative(alt.weights);
        } else if constexpr (std::is_same_v<T, Mixture>) {
          node->kind = Kind::Mix;
          std::vector<double> w;
          for (const auto& c : alt.components) {
            w.push_back(c.weight);
            node->children.push_back(buildNode(c.spec));
          }
          node->cdf = cumulative(w);
        } else {
          node->kind = Kind::Pathological;
          node->sCap = alt.sCap;
          node->table = std::make_shared<LengthScaleTable>(
              buildLengthScales(alt.omega, alt.sCap));
          node->atoms.resize(2, alt.sCap);
          for (int s = 0; s < alt.sCap; ++s)
            node->atoms.col(s) << 1.0 / node->table->entries[s].L, -0.5;
        }
      },
      spec.v);
  return node;
}

} // namespace

Sampler::Sampler(const DistributionSpec& spec) : spec_(spec) {
  spec_.validate();
  dim_ = spec_.dimension();
  if (dim_ < 1)
    throw UsageError("distribution dimension is unbound; bind it to d first");
  if (auto* mix = std::get_if<Mixture>(&spec_.v)) {
    for (const auto& c : mix->components)
      if (c.spec.dimension() == 0)
        throw UsageError("mixture component has unbound dimension");
  }
  root_ = buildNode(spec_);
}

const LengthScaleTable* Sampler::lengthScales() const noexcept {
  return root_->table.get();
}

void Sampler::sample(CounterRng& rng, Eigen::Ref<Vec> out) const {
  root_->sample(rng, out);
}

Vec Sampler::sample(CounterRng& rng) const {
  Vec out(dim_);
  root_->sample(rng, out);
  return out;
}

// ---------------------------------------------------------------------------
// probes

Estimate slabProbabilityEstimate(const DistributionSpec& spec, const Vec& e,
                                 double b, std::int64_t nSamples,
                                 CounterRng& rng) {
  if (nSamples < 1) throw UsageError("nSamples must be >= 1");
  if (!(b >= 0.0 && b <= 1.0)) throw UsageError("slab half-width b must lie in [0, 1]");
  if (std::abs(e.norm() - 1.0) > 1e-9) throw UsageError("slab direction must be a unit vector");
  const Sampler sampler(spec.bound(static_cast<int>(e.size())));
  if (sampler.dimension() != e.size())
    throw UsageError("slab direction has the wrong dimension");

  Vec x(sampler.dimension());
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < nSamples; ++i) {
    sampler.sample(rng, x);
    if (std::abs(x.dot(e)) <= b) ++hits;
  }
  const double n = static_cast<double>(nSamples);
  const double p = static_cast<double>(hits) / n;
  return {p, std::sqrt(p * (1.0 - p) / n)};
}

CmuEstimate estimateCmu(const DistributionSpec& spec, int nDirections,
                        std::int64_t nSamples, CounterRng& rng) {
  if (nDirections < 1) throw UsageError("nDirections must be >= 1");
  if (nSamples < 1) throw UsageError("nSamples must be >= 1");
  const Sampler sampler(spec);
  const int d = sampler.dimension();

  CmuEstimate out;
  Eigen::MatrixXd dirs(d, nDirections);
  for (int j = 0; j < nDirections; ++j) {
    Vec g(d);
    double z0, z1;
    do {
      for (int i = 0; i < d; i += 2) {
        rng.gaussianPair(z0, z1);
        g(i) = z0;
        if (i + 1 < d) g(i + 1) = z1;
      }
    } while (g.norm() == 0.0);
    dirs.col(j) = g / g.norm();
    out.directions.push_back(dirs.col(j));
  }

  // Welford per direction over one shared sample stream.
  Eigen::ArrayXd mean = Eigen::ArrayXd::Zero(nDirections);
  Eigen::ArrayXd m2 = Eigen::ArrayXd::Zero(nDirections);
  Vec x(d);
  for (std::int64_t i = 0; i < nSamples; ++i) {
    sampler.sample(rng, x);
    const Eigen::ArrayXd proj = (dirs.transpose() * x).array().abs();
    const Eigen::ArrayXd delta = proj - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (proj - mean);
  }

  const double n = static_cast<double>(nSamples);
  out.cHat = std::numeric_limits<double>::infinity();
  for (int j = 0; j < nDirections; ++j) {
    out.perDirection.push_back(mean(j));
    const double var = nSamples > 1 ? m2(j) / (n - 1.0) : 0.0;
    out.perDirectionStdErr.push_back(std::sqrt(var / n));
    out.cHat = std::min(out.cHat, mean(j));
  }
  return out;
}

} // namespace vecbal
