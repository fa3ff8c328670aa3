#include "itc/rsc.hpp"

#include <stdexcept>

namespace itc {

namespace {

// State packs the last three feedback bits, newest in bit 0. Feedback taps
// are D^2 and D^3 (octal 13 with the constant term on the input), forward
// taps 1, D, D^3 (octal 15).
Trellis build_trellis() {
  Trellis t;
  for (int s = 0; s < Trellis::kNumStates; ++s) {
    const int s0 = s & 1;
    const int s1 = (s >> 1) & 1;
    const int s2 = (s >> 2) & 1;
    for (int u = 0; u < 2; ++u) {
      const int a = u ^ s1 ^ s2;
      t.next_state[s][u] = static_cast<std::uint8_t>(a | (s0 << 1) | (s1 << 2));
      t.parity_out[s][u] = static_cast<std::uint8_t>(a ^ s0 ^ s2);
    }
    t.termination_input[s] = static_cast<std::uint8_t>(s1 ^ s2);
  }
  return t;
}

}  // namespace

const Trellis& Trellis::instance() {
  static const Trellis t = build_trellis();
  return t;
}

RscOutput rsc_encode(const BitVec& input, const Trellis& trellis) {
  for (Index i = 0; i < input.size(); ++i) {
    if (input[i] > 1) {
      throw std::invalid_argument("rsc_encode: input bits must be 0 or 1");
    }
  }
  RscOutput out;
  out.parity.resize(input.size());
  std::uint8_t state = 0;
  for (Index i = 0; i < input.size(); ++i) {
    const int u = input[i];
    out.parity[i] = trellis.parity_out[state][u];
    state = trellis.next_state[state][u];
  }
  for (int i = 0; i < Trellis::kMemory; ++i) {
    const int u = trellis.termination_input[state];
    out.tail_systematic[static_cast<std::size_t>(i)] =
        static_cast<std::uint8_t>(u);
    out.tail_parity[static_cast<std::size_t>(i)] =
        trellis.parity_out[state][u];
    state = trellis.next_state[state][u];
  }
  out.final_state = state;
  return out;
}

}  // namespace itc
