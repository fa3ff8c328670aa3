#include "selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "itc/codec.hpp"
#include "itc/phy.hpp"
#include "itc/rng.hpp"
#include "itc/rsc.hpp"
#include "itc/siso.hpp"
#include "oracles.hpp"

namespace itc::tools {

namespace {

void expect(bool condition, const std::string& what) {
  if (!condition) throw std::runtime_error(what);
}

void expect_near(double got, double want, double tol, const std::string& what) {
  if (!(std::abs(got - want) <= tol)) {
    std::ostringstream msg;
    msg << what << ": got " << got << ", want " << want << " +/- " << tol;
    throw std::runtime_error(msg.str());
  }
}

BitVec random_bits(Index n, RngStream& rng) {
  BitVec bits(n);
  for (Index i = 0; i < n; ++i) bits[i] = rng.next_bit();
  return bits;
}

SisoInput random_siso_input(Index m, RngStream& rng) {
  SisoInput in;
  in.systematic.resize(m);
  in.parity.resize(m);
  in.apriori.resize(m);
  for (Index i = 0; i < m; ++i) {
    in.systematic[i] = 3.0 * rng.next_gaussian();
    in.parity[i] = 3.0 * rng.next_gaussian();
    in.apriori[i] = 3.0 * rng.next_gaussian();
  }
  for (std::size_t i = 0; i < 3; ++i) {
    in.tail_systematic[i] = 3.0 * rng.next_gaussian();
    in.tail_parity[i] = 3.0 * rng.next_gaussian();
  }
  return in;
}

void check_golden_impulse(const std::string& path) {
  std::ifstream in(path);
  expect(in.good(), "cannot open golden file '" + path + "'");
  std::string parity, tail_systematic, tail_parity;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string key, value;
    row >> key >> value;
    if (key == "parity") parity = value;
    if (key == "tail_systematic") tail_systematic = value;
    if (key == "tail_parity") tail_parity = value;
  }
  expect(parity.size() == 32 && tail_systematic.size() == 3 &&
             tail_parity.size() == 3,
         "golden file '" + path + "' is malformed");
  const auto not_bits = [](const std::string& s) {
    return s.find_first_not_of("01") != std::string::npos;
  };
  expect(!not_bits(parity) && !not_bits(tail_systematic) &&
             !not_bits(tail_parity),
         "golden file '" + path + "' contains non-binary digits");

  BitVec impulse = BitVec::Zero(32);
  impulse[0] = 1;
  const auto out = rsc_encode(impulse);
  for (Index i = 0; i < 32; ++i) {
    expect(out.parity[i] == parity[static_cast<std::size_t>(i)] - '0',
           "impulse parity differs from golden at position " +
               std::to_string(i));
  }
  for (std::size_t i = 0; i < 3; ++i) {
    expect(out.tail_systematic[i] == tail_systematic[i] - '0',
           "impulse tail systematic differs from golden");
    expect(out.tail_parity[i] == tail_parity[i] - '0',
           "impulse tail parity differs from golden");
  }
}

void check_rsc_reference() {
  RngStream rng(1001);
  for (int frame = 0; frame < 50; ++frame) {
    const BitVec bits = random_bits(64, rng);
    std::vector<std::uint8_t> plain(bits.data(), bits.data() + bits.size());
    const auto lib = rsc_encode(bits);
    const auto ref = oracle::rsc_reference(plain);
    for (Index i = 0; i < 64; ++i) {
      expect(lib.parity[i] == ref.parity[static_cast<std::size_t>(i)],
             "parity mismatch vs reference encoder");
    }
    for (std::size_t i = 0; i < 3; ++i) {
      expect(lib.tail_systematic[i] == ref.tail_systematic[i] &&
                 lib.tail_parity[i] == ref.tail_parity[i],
             "tail mismatch vs reference encoder");
    }
    expect(lib.final_state == 0, "encoder did not terminate at state 0");
  }
}

void check_max_star() {
  expect_near(max_star(0.0, 0.0), 0.6931471805599453, 1e-12, "max*(0,0)");
  expect_near(max_star(5.0, 0.0), 5.006715348489118, 1e-12, "max*(5,0)");
  expect(max_star(3.7, kNegInf) == 3.7, "max* must absorb the sentinel");
  expect(max_star(5.0, 0.0, MaxStarMode::kMaxLog) == 5.0, "max-log mode");
}

void check_posteriors() {
  RngStream rng(2002);
  for (int draw = 0; draw < 3; ++draw) {
    const auto in = random_siso_input(12, rng);
    const auto out = log_map_decode(in);
    const auto ref = oracle::exhaustive_app(in);
    for (Index k = 0; k < 12; ++k) {
      expect_near(out.app[k], ref[static_cast<std::size_t>(k)], 1e-6,
                  "posterior vs enumeration at position " + std::to_string(k));
    }
  }
}

void check_decomposition() {
  RngStream rng(3003);
  const auto in = random_siso_input(24, rng);
  const auto out = log_map_decode(in);
  for (Index k = 0; k < 24; ++k) {
    expect_near(out.app[k] - in.systematic[k] - in.apriori[k], out.extrinsic[k],
                1e-12, "app decomposition at position " + std::to_string(k));
  }
}

void check_copy_exchange() {
  const auto map3 = realize(DegreeProfile{{3, 1.0}}, 1);
  LlrVec ext(3);
  ext << 1.0, -2.0, 0.5;
  const LlrVec out = extrinsic_combine(ext, map3);
  expect_near(out[0], -1.5, 1e-12, "degree-3 exchange");
  expect_near(out[1], 1.5, 1e-12, "degree-3 exchange");
  expect_near(out[2], -1.0, 1e-12, "degree-3 exchange");

  const auto mixed = realize(DegreeProfile{{2, 0.85}, {7, 0.15}}, 40);
  RngStream rng(4004);
  LlrVec e(mixed.repeated_length());
  for (Index i = 0; i < e.size(); ++i) e[i] = 5.0 * rng.next_gaussian();
  const LlrVec combined = extrinsic_combine(e, mixed);
  for (Index j = 0; j < mixed.source_count; ++j) {
    const Index start = mixed.group_start[static_cast<std::size_t>(j)];
    const int d = mixed.degree_of[static_cast<std::size_t>(j)];
    double sum = 0.0;
    for (int k = 0; k < d; ++k) sum += e[start + k];
    for (int k = 0; k < d; ++k) {
      expect_near(combined[start + k], sum - e[start + k], 1e-9,
                  "group exchange leaves its own copy out");
    }
  }
}

void check_rate_formula() {
  expect_near(code_rate(DegreeProfile{{2, 1.0}}, PuncturePattern::parse("1")),
              1.0 / 3.0, 1e-12, "rate for the unpunctured regular profile");
  expect_near(code_rate(DegreeProfile::parse("2:0.888,8:0.06,9:0.052"),
                        PuncturePattern::parse("11101101110")),
              0.3354476702, 1e-9, "rate for the high-degree mix");
  expect_near(code_rate(DegreeProfile::parse("2:0.85,7:0.15"),
                        PuncturePattern::parse("11101101110")),
              1.0 / 3.0, 1e-12, "rate for the 0.85/0.15 mix");
}

void check_permutations() {
  const Index expected8[] = {7, 0, 5, 1, 2, 4, 3, 6};
  const auto p8 = Permutation::generate(8, 42);
  for (Index i = 0; i < 8; ++i) {
    expect(p8.forward()[static_cast<std::size_t>(i)] == expected8[i],
           "pinned permutation (8, 42) changed");
  }
  const Index expected5[] = {1, 3, 4, 2, 0};
  const auto p5 = Permutation::generate(5, 7);
  for (Index i = 0; i < 5; ++i) {
    expect(p5.forward()[static_cast<std::size_t>(i)] == expected5[i],
           "pinned permutation (5, 7) changed");
  }
  const auto p = Permutation::generate(256, 9);
  std::vector<bool> seen(256, false);
  for (Index i = 0; i < 256; ++i) {
    const Index dest = p.forward()[static_cast<std::size_t>(i)];
    expect(dest >= 0 && dest < 256 && !seen[static_cast<std::size_t>(dest)],
           "permutation is not a bijection");
    seen[static_cast<std::size_t>(dest)] = true;
  }
}

void check_constellations() {
  for (Modulation mod : {Modulation::kBpsk, Modulation::kQpsk,
                         Modulation::kQam16, Modulation::kQam64}) {
    const auto& c = Constellation::get(mod);
    expect_near(c.average_energy(), 1.0, 1e-12,
                to_string(mod) + " average energy");

    const auto& levels = c.axis_levels();
    std::vector<unsigned> order(levels.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](unsigned a, unsigned b) { return levels[a] > levels[b]; });
    for (std::size_t i = 1; i < order.size(); ++i) {
      unsigned diff = order[i - 1] ^ order[i];
      expect(diff != 0 && (diff & (diff - 1)) == 0,
             to_string(mod) + " axis labels are not a gray walk");
    }
    const unsigned sign_bit = 1u << (c.bits_per_axis() - 1);
    for (unsigned label = 0; label < levels.size(); ++label) {
      expect(((label & sign_bit) != 0) == (levels[label] < 0.0),
             to_string(mod) + " leading bit is not the sign");
    }
  }
}

void check_bpsk_demap() {
  RngStream rng(5005);
  const auto& c = Constellation::get(Modulation::kBpsk);
  const double sigma2 = 0.6;
  CxVec y(20);
  for (Index i = 0; i < 20; ++i) y[i] = {1.5 * rng.next_gaussian(), 0.0};
  const LlrVec llr = demap(y, c, sigma2);
  for (Index i = 0; i < 20; ++i) {
    expect_near(llr[i], 2.0 * y[i].real() / sigma2,
                1e-9 * std::max(1.0, std::abs(llr[i])),
                "closed-form demap at symbol " + std::to_string(i));
  }
}

void check_roundtrip() {
  CodecConfig cfg;
  cfg.frame_size = 100;
  cfg.profile = DegreeProfile{{2, 0.85}, {7, 0.15}};
  cfg.pattern = PuncturePattern::parse("11101101110");
  cfg.interleaver_seed = 17;
  cfg.stop_rule = StopRule::kStableDecisions;
  const Codec codec(cfg);

  RngStream rng(6006);
  const BitVec bits = random_bits(100, rng);
  const auto frame = codec.encode(bits);

  ChannelLlrs llrs;
  llrs.systematic.resize(100);
  for (Index i = 0; i < 100; ++i) {
    llrs.systematic[i] = frame.systematic[i] == 0 ? kLlrMax : -kLlrMax;
  }
  llrs.parity.resize(frame.parity.size());
  for (Index i = 0; i < frame.parity.size(); ++i) {
    llrs.parity[i] = frame.parity[i] == 0 ? kLlrMax : -kLlrMax;
  }
  for (std::size_t i = 0; i < 6; ++i) {
    llrs.tail[i] = frame.tail[i] == 0 ? kLlrMax : -kLlrMax;
  }

  const auto result = codec.decode(llrs);
  expect((result.decisions == bits).all(), "noiseless frame misdecoded");
  expect(result.converged && result.iterations_used == 1,
         "noiseless frame should converge on the first pass");
}

void check_awgn_moments() {
  RngStream rng(7007);
  const Index n = 200000;
  const double sigma2 = 0.8;
  const CxVec noisy = awgn(CxVec::Zero(n), sigma2, true, rng);
  double mean = 0.0, var = 0.0;
  for (Index i = 0; i < n; ++i) {
    mean += noisy[i].real() + noisy[i].imag();
    var += noisy[i].real() * noisy[i].real() +
           noisy[i].imag() * noisy[i].imag();
  }
  mean /= 2.0 * n;
  var = var / (2.0 * n) - mean * mean;
  expect_near(mean, 0.0, 5.0 * std::sqrt(sigma2 / (2.0 * n)), "noise mean");
  expect_near(var, sigma2, 0.03 * sigma2, "noise variance");
}

}  // namespace

std::vector<CheckResult> run_selftests(const SelftestOptions& options) {
  const std::pair<const char*, std::function<void()>> checks[] = {
      {"golden-impulse-response",
       [&] { check_golden_impulse(options.golden_rsc_path); }},
      {"rsc-matches-reference", check_rsc_reference},
      {"max-star-identities", check_max_star},
      {"posteriors-match-enumeration", check_posteriors},
      {"extrinsic-decomposition", check_decomposition},
      {"copy-exchange", check_copy_exchange},
      {"rate-formula", check_rate_formula},
      {"pinned-permutations", check_permutations},
      {"constellation-labels", check_constellations},
      {"bpsk-demap-closed-form", check_bpsk_demap},
      {"noiseless-roundtrip", check_roundtrip},
      {"awgn-moments", check_awgn_moments},
  };

  std::vector<CheckResult> results;
  for (const auto& [name, fn] : checks) {
    CheckResult r;
    r.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      fn();
      r.passed = true;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = e.what();
    }
    r.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace itc::tools
