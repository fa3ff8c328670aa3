#ifndef ITC_TYPES_HPP
#define ITC_TYPES_HPP

#include <cstdint>

#include <Eigen/Core>

namespace itc {

using Index = Eigen::Index;

// Dense column arrays are the working currency of the whole signal chain:
// hard bits, LLR streams and complex baseband symbols.
using BitVec = Eigen::Array<std::uint8_t, Eigen::Dynamic, 1>;
using LlrVec = Eigen::ArrayXd;
using CxVec = Eigen::ArrayXcd;

// LLR convention everywhere: L = ln(P(bit = 0) / P(bit = 1)), so bit 0 maps
// to the positive half axis and to the +1 BPSK symbol.
//
// Channel and a-priori LLRs are saturated to +/-kLlrMax before they enter a
// SISO pass; above 50 the max* correction term is below double precision.
inline constexpr double kLlrMax = 50.0;

// Finite stand-in for log(0). It only ever reaches arithmetic through the
// absorbing branch of max*, which returns the other operand unchanged.
inline constexpr double kNegInf = -1e9;

inline LlrVec clamp_llr(const LlrVec& v, double bound = kLlrMax) {
  return v.min(bound).max(-bound);
}

}  // namespace itc

#endif  // ITC_TYPES_HPP
