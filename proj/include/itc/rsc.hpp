#ifndef ITC_RSC_HPP
#define ITC_RSC_HPP

#include <array>
#include <cstdint>

#include "itc/types.hpp"

namespace itc {

// Rate-1/2 recursive systematic convolutional code, feedback 13 / forward 15
// (octal), constraint length 4. State packs the shift register as
// s = a_{k-1} | a_{k-2}<<1 | a_{k-3}<<2 where a is the feedback bit.
struct Trellis {
  static constexpr int kNumStates = 8;
  static constexpr int kMemory = 3;

  // next_state[s][u], parity_out[s][u] for input bit u.
  std::array<std::array<std::uint8_t, 2>, kNumStates> next_state{};
  std::array<std::array<std::uint8_t, 2>, kNumStates> parity_out{};
  // Input that steps the register one position toward the zero state.
  std::array<std::uint8_t, kNumStates> termination_input{};

  static const Trellis& instance();
};

struct RscOutput {
  BitVec parity;  // one parity bit per input bit
  std::array<std::uint8_t, Trellis::kMemory> tail_systematic{};
  std::array<std::uint8_t, Trellis::kMemory> tail_parity{};
  std::uint8_t final_state = 0;  // always 0 after the tail
};

// Encodes from the zero state and appends the three termination steps that
// drive the register back to zero. The tail systematic bits are the
// feedback-derived inputs, not a continuation of the message.
RscOutput rsc_encode(const BitVec& input, const Trellis& trellis = Trellis::instance());

}  // namespace itc

#endif  // ITC_RSC_HPP
