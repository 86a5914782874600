#include "vecbal/strategies.hpp"

namespace vecbal {

std::string toString(StrategyKind kind) {
  switch (kind) {
  case StrategyKind::UniformRandom: return "uniform-random";
  case StrategyKind::Greedy1D: return "greedy-1d";
  case StrategyKind::InnerProduct: return "inner-product";
  case StrategyKind::BestOfTwo: return "best-of-two";
  }
  return "?";
}

StrategyKind strategyFromString(const std::string& name) {
  if (name == "uniform-random") return StrategyKind::UniformRandom;
  if (name == "greedy-1d") return StrategyKind::Greedy1D;
  if (name == "inner-product") return StrategyKind::InnerProduct;
  if (name == "best-of-two") return StrategyKind::BestOfTwo;
  throw ValidationError("strategy", "unknown strategy '" + name +
                                        "' (uniform-random|greedy-1d|inner-product|best-of-two)");
}

void validateStrategy(StrategyKind kind, int d, int k) {
  if (d < 1) throw ValidationError("d", "must be >= 1");
  if (k < 2) throw ValidationError("k", "must be >= 2");
  if (kind == StrategyKind::Greedy1D && d != 1)
    throw ValidationError("strategy", "greedy-1d requires d = 1 (got d = " +
                                          std::to_string(d) + ")");
}

} // namespace vecbal
