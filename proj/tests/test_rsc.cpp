#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "itc/rng.hpp"
#include "itc/rsc.hpp"
#include "oracles.hpp"

using namespace itc;

namespace {

struct GoldenRsc {
  std::string parity;
  std::string tail_systematic;
  std::string tail_parity;
};

GoldenRsc load_golden(const std::string& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "cannot open golden file ", path);
  GoldenRsc g;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string key, value;
    row >> key >> value;
    if (key == "parity") g.parity = value;
    if (key == "tail_systematic") g.tail_systematic = value;
    if (key == "tail_parity") g.tail_parity = value;
  }
  return g;
}

}  // namespace

TEST_CASE("impulse response matches the golden vector") {
  const auto golden =
      load_golden(std::string(ITC_SOURCE_DIR) + "/tests/golden/rsc_impulse.txt");
  REQUIRE(golden.parity.size() == 32);

  BitVec impulse = BitVec::Zero(32);
  impulse[0] = 1;
  const auto out = rsc_encode(impulse);
  for (Index i = 0; i < 32; ++i) {
    CHECK(out.parity[i] == golden.parity[static_cast<std::size_t>(i)] - '0');
  }
  for (int i = 0; i < 3; ++i) {
    CHECK(out.tail_systematic[static_cast<std::size_t>(i)] ==
          golden.tail_systematic[static_cast<std::size_t>(i)] - '0');
    CHECK(out.tail_parity[static_cast<std::size_t>(i)] ==
          golden.tail_parity[static_cast<std::size_t>(i)] - '0');
  }
  CHECK(out.final_state == 0);
}

TEST_CASE("recursive parity repeats with period 7 after the impulse") {
  BitVec impulse = BitVec::Zero(30);
  impulse[0] = 1;
  const auto out = rsc_encode(impulse);
  for (Index i = 1; i + 7 < 30; ++i) {
    CHECK(out.parity[i] == out.parity[i + 7]);
  }
}

TEST_CASE("library encoder equals the shift-register reference") {
  RngStream rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const Index n = 1 + static_cast<Index>(rng.next_below(80));
    BitVec bits(n);
    std::vector<std::uint8_t> raw(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
      bits[i] = rng.next_bit();
      raw[static_cast<std::size_t>(i)] = bits[i];
    }
    const auto lib = rsc_encode(bits);
    const auto ref = oracle::rsc_reference(raw);
    for (Index i = 0; i < n; ++i) {
      CHECK(lib.parity[i] == ref.parity[static_cast<std::size_t>(i)]);
    }
    for (int i = 0; i < 3; ++i) {
      CHECK(lib.tail_systematic[static_cast<std::size_t>(i)] ==
            ref.tail_systematic[static_cast<std::size_t>(i)]);
      CHECK(lib.tail_parity[static_cast<std::size_t>(i)] ==
            ref.tail_parity[static_cast<std::size_t>(i)]);
    }
    CHECK(lib.final_state == 0);
  }
}

TEST_CASE("encoding is linear including the tail") {
  RngStream rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 1 + static_cast<Index>(rng.next_below(50));
    BitVec a(n), b(n), both(n);
    for (Index i = 0; i < n; ++i) {
      a[i] = rng.next_bit();
      b[i] = rng.next_bit();
      both[i] = a[i] ^ b[i];
    }
    const auto ea = rsc_encode(a);
    const auto eb = rsc_encode(b);
    const auto es = rsc_encode(both);
    for (Index i = 0; i < n; ++i) {
      CHECK(es.parity[i] == (ea.parity[i] ^ eb.parity[i]));
    }
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(es.tail_systematic[i] ==
            (ea.tail_systematic[i] ^ eb.tail_systematic[i]));
      CHECK(es.tail_parity[i] == (ea.tail_parity[i] ^ eb.tail_parity[i]));
    }
  }
}

TEST_CASE("all-zero input stays all zero") {
  const auto out = rsc_encode(BitVec::Zero(40));
  CHECK((out.parity == 0).all());
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(out.tail_systematic[i] == 0);
    CHECK(out.tail_parity[i] == 0);
  }
}

TEST_CASE("trellis tables are internally consistent") {
  const auto& t = Trellis::instance();
  for (int s = 0; s < Trellis::kNumStates; ++s) {
    const int u = t.termination_input[s];
    // three termination steps reach the zero state from anywhere
    int state = s;
    for (int i = 0; i < 3; ++i) {
      state = t.next_state[state][t.termination_input[state]];
    }
    CHECK(state == 0);
    // the two branches out of a state land on distinct states
    CHECK(t.next_state[s][0] != t.next_state[s][1]);
    (void)u;
  }
}

TEST_CASE("non-binary input is rejected") {
  BitVec bad(3);
  bad << 0, 2, 1;
  CHECK_THROWS_AS(rsc_encode(bad), std::invalid_argument);
}
