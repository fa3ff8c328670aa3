#ifndef ITC_SISO_HPP
#define ITC_SISO_HPP

#include <array>
#include <cmath>

#include "itc/rsc.hpp"
#include "itc/types.hpp"

namespace itc {

enum class MaxStarMode {
  kExact,  // max(a,b) + log1p(exp(-|a-b|))
  kMaxLog  // max(a,b)
};

inline double max_star(double a, double b, MaxStarMode mode = MaxStarMode::kExact) {
  double m = a > b ? a : b;
  if (mode == MaxStarMode::kMaxLog) return m;
  double d = a > b ? a - b : b - a;
  return m + std::log1p(std::exp(-d));
}

// Channel and prior observations for one constituent decode. All LLRs use
// L = ln(P(0)/P(1)). Tail observations are separate because the tail is
// never punctured and never carries a priori information.
struct SisoInput {
  LlrVec systematic;
  LlrVec parity;  // depunctured: exact zeros at deleted positions
  LlrVec apriori;
  std::array<double, Trellis::kMemory> tail_systematic{};
  std::array<double, Trellis::kMemory> tail_parity{};
};

struct SisoOutput {
  LlrVec extrinsic;  // app - systematic - apriori, unclamped
  LlrVec app;
};

// Log-domain BCJR over the terminated trellis: alpha anchored at state 0,
// beta anchored at state 0 after the tail steps. Outputs are unclamped so
// app = systematic + apriori + extrinsic holds exactly.
SisoOutput log_map_decode(const SisoInput& input,
                          const Trellis& trellis = Trellis::instance(),
                          MaxStarMode mode = MaxStarMode::kExact);

}  // namespace itc

#endif  // ITC_SISO_HPP
