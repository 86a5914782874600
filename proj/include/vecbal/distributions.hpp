#pragma once

// Input distributions on the unit ball, their samplers, and Monte Carlo
// probes of their geometry.
//
// Draw pattern per sample (uniform draws from the caller's stream):
//   UniformBall(d)      2*ceil(d/2) for Box-Muller normals, then 1 for radius
//   Atomic              1 (inverse CDF)
//   Mixture             1 to pick the component, then that component's draws
//   PathologicalOmega   1 to pick the component, then
//                         point (0, 1/2): 0
//                         uniform disk:   3
//                         atom (1/L_s, -1/2): 1 (sequential inverse CDF over s)

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "vecbal/core.hpp"
#include "vecbal/rng.hpp"

namespace vecbal {

// ---------------------------------------------------------------------------
// omega and the length-scale table

enum class OmegaKind { Identity, Power, LogPower, Table };

/// Monotone unbounded map used to build the pathological distribution.
///   Identity: x
///   Power:    x^exponent
///   LogPower: log(1 + x)^exponent
///   Table:    piecewise linear through (x, y) breakpoints, constant left of
///             the first point, and an OmegaDomainError beyond the last.
struct OmegaSpec {
  OmegaKind kind = OmegaKind::Identity;
  double exponent = 1.0;
  std::vector<std::pair<double, double>> table;

  static OmegaSpec identity() { return {}; }
  static OmegaSpec power(double p) { return {OmegaKind::Power, p, {}}; }
  static OmegaSpec logPower(double p) { return {OmegaKind::LogPower, p, {}}; }
  static OmegaSpec fromTable(std::vector<std::pair<double, double>> pts) {
    return {OmegaKind::Table, 1.0, std::move(pts)};
  }

  void validate() const;
  double operator()(double x) const;

  friend bool operator==(const OmegaSpec&, const OmegaSpec&) = default;
};

std::string toString(OmegaKind kind);
OmegaKind omegaKindFromString(const std::string& name);

struct LengthScale {
  int s = 0;
  double L = 0.0;
  double T = 0.0;         // floor(exp(s^2 L^2)); +inf when saturated
  bool saturated = false; // exp(s^2 L^2) overflowed double
};

struct LengthScaleTable {
  std::vector<LengthScale> entries;
  double tailMass = 0.0; // 1 - (6/pi^2) * sum_{s <= sCap} s^-2
};

/// Grid pitch used when searching for L_s.
inline constexpr double kLengthGridPitch = 0.01;

/// L_s = the smallest 2 + j/100 with omega(exp(s^2 L_s^2) - 1) >= 10 s, for
/// s = 1..sCap. Throws OmegaDomainError if omega is queried past its domain.
LengthScaleTable buildLengthScales(const OmegaSpec& omega, int sCap);

/// (6/pi^2) s^-2.
double baselWeight(int s);

// ---------------------------------------------------------------------------
// distribution specs

struct UniformBall {
  int d = 0; // 0 = take the dimension from the surrounding config
  friend bool operator==(const UniformBall&, const UniformBall&) = default;
};

struct Atomic {
  std::vector<Vec> atoms;
  std::vector<double> weights;
};
bool operator==(const Atomic& a, const Atomic& b);

struct MixtureComponent;
struct Mixture {
  std::vector<MixtureComponent> components;
};
bool operator==(const Mixture& a, const Mixture& b);

inline constexpr int kDefaultSCap = 50;

/// The three-way mixture of (0, 1/2), the uniform disk, and the atoms
/// (1/L_s, -1/2) with weights (6/pi^2) s^-2; the atom index is folded into
/// s = sCap beyond the cap.
struct PathologicalOmega {
  OmegaSpec omega;
  int sCap = kDefaultSCap;
  friend bool operator==(const PathologicalOmega&, const PathologicalOmega&) = default;
};

struct DistributionSpec {
  std::variant<UniformBall, Atomic, Mixture, PathologicalOmega> v;

  DistributionSpec() = default;
  template <typename T>
    requires(!std::is_same_v<std::decay_t<T>, DistributionSpec> &&
             std::is_constructible_v<decltype(v), T>)
  DistributionSpec(T alt) : v(std::move(alt)) {}

  /// Ambient dimension, or 0 when an unbound UniformBall leaves it open.
  int dimension() const;
  /// Throws ValidationError naming `field` on any invariant violation.
  void validate(const std::string& field = "distribution") const;
  /// Fills every unbound UniformBall with dimension d.
  DistributionSpec bound(int d) const;

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

struct MixtureComponent {
  double weight = 0.0;
  DistributionSpec spec;
  friend bool operator==(const MixtureComponent&, const MixtureComponent&) = default;
};

DistributionSpec pointMass(const Vec& at);

/// Variant name as used in config files.
std::string variantName(const DistributionSpec& spec);

// ---------------------------------------------------------------------------
// samplers

/// Uniform on the solid unit ball: Gaussian direction, radius U^(1/d).
void sampleUniformBall(int d, CounterRng& rng, Eigen::Ref<Vec> out);
Vec sampleUniformBall(int d, CounterRng& rng);

/// Index of the atom selected by the uniform value u in [0, 1).
std::size_t atomIndexForUniform(const std::vector<double>& cumulative, double u);

/// Atom index s in 1..sCap selected by u under weights (6/pi^2) s^-2, with
/// the tail beyond sCap folded into sCap.
int lengthScaleIndexForUniform(double u, int sCap);

/// Immutable, shareable sampler for a validated, dimension-bound spec.
class Sampler {
public:
  explicit Sampler(const DistributionSpec& spec);

  int dimension() const noexcept { return dim_; }
  const DistributionSpec& spec() const noexcept { return spec_; }
  /// Non-null for PathologicalOmega specs.
  const LengthScaleTable* lengthScales() const noexcept;

  void sample(CounterRng& rng, Eigen::Ref<Vec> out) const;
  Vec sample(CounterRng& rng) const;

  struct Node; // internal, public for the implementation file only

private:
  DistributionSpec spec_;
  int dim_ = 0;
  std::shared_ptr<const Node> root_;
};

// ---------------------------------------------------------------------------
// probes

struct Estimate {
  double value = 0.0;
  double stdErr = 0.0;
};

/// Monte Carlo estimate of mu({x : |<x, e>| <= b}) with binomial s.e.
Estimate slabProbabilityEstimate(const DistributionSpec& spec, const Vec& e,
                                 double b, std::int64_t nSamples,
                                 CounterRng& rng);

struct CmuEstimate {
  double cHat = 0.0; // min over sampled directions; biased upward
  std::vector<Vec> directions;
  std::vector<double> perDirection;
  std::vector<double> perDirectionStdErr;
};

/// Estimates f(e) = E|<X, e>| for nDirections uniformly random unit vectors e,
/// all from one shared set of nSamples draws.
CmuEstimate estimateCmu(const DistributionSpec& spec, int nDirections,
                        std::int64_t nSamples, CounterRng& rng);

} // namespace vecbal
