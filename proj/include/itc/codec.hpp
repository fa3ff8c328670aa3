#ifndef ITC_CODEC_HPP
#define ITC_CODEC_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>

#include "itc/interleave.hpp"
#include "itc/profile.hpp"
#include "itc/rsc.hpp"
#include "itc/siso.hpp"
#include "itc/types.hpp"

namespace itc {

enum class StopRule {
  kFixed,            // always run max_iterations passes
  kStableDecisions,  // stop when two consecutive decision sets match
  kGenie             // stop when decisions equal known transmitted bits
};

struct CodecConfig {
  Index frame_size = 0;
  DegreeProfile profile{{DegreeEntry{2, 1.0}}};
  PuncturePattern pattern;
  std::uint64_t interleaver_seed = 0;
  int max_iterations = 8;  // SISO passes
  StopRule stop_rule = StopRule::kFixed;
  // Each systematic copy receives the full channel LLR by default; the
  // 1/degree scaling alternative is kept for experiments.
  bool scale_repeated_llrs = false;
  // Block S counts the channel LLR once by default; per-copy counting is
  // the untested alternative.
  bool decision_channel_llr_per_copy = false;
  MaxStarMode max_star_mode = MaxStarMode::kExact;
};

struct EncodedFrame {
  BitVec systematic;                    // the K source bits, original order
  BitVec parity;                        // kept parity bits after puncturing
  std::array<std::uint8_t, 6> tail{};  // 3 tail systematic then 3 tail parity
  Index transmitted_length = 0;         // K + kept parity + 6
};

// Receiver-side observations in the same order encode() emits bits.
struct ChannelLlrs {
  LlrVec systematic;            // length K
  LlrVec parity;                // length = kept parity count
  std::array<double, 6> tail{};  // 3 tail systematic then 3 tail parity
};

struct DecodeResult {
  BitVec decisions;          // length K
  int iterations_used = 0;   // SISO passes actually run
  bool converged = false;    // an early-stop rule fired
  LlrVec final_app;          // per-source-bit decision metric
};

// Per-pass observer for extrinsic snapshots, in the source-order repeated
// stream domain (after deinterleaving).
using TraceFn = std::function<void(int pass, const LlrVec& extrinsic)>;

// Exchange within each copy group: the new a priori for copy k is the sum
// of the other copies' extrinsics. Debug builds assert the conservation
// identity sum_k new_k = (d-1) * sum_l E_l per group.
LlrVec extrinsic_combine(const LlrVec& extrinsic, const RepetitionMap& map);

// Selection block: per source bit, channel LLR plus the sum of all its
// copies' extrinsics (channel term once, or degree times when
// channel_llr_per_copy is set).
LlrVec source_app(const LlrVec& channel_systematic, const LlrVec& extrinsic,
                  const RepetitionMap& map, bool channel_llr_per_copy = false);

// app >= 0 decides bit 0.
BitVec hard_decisions(const LlrVec& app);

class Codec {
 public:
  explicit Codec(CodecConfig config);

  const CodecConfig& config() const { return config_; }
  const RepetitionMap& repetition_map() const { return map_; }
  const Permutation& permutation() const { return perm_; }

  Index frame_size() const { return config_.frame_size; }
  Index repeated_length() const { return map_.repeated_length(); }
  Index kept_parity_count() const { return kept_parity_; }
  Index transmitted_length() const {
    return config_.frame_size + kept_parity_ + 6;
  }
  double nominal_rate() const;
  // K / transmitted_length, tail overhead included.
  double measured_rate() const;

  EncodedFrame encode(const BitVec& bits) const;

  // known_bits is required by the genie rule and ignored otherwise.
  DecodeResult decode(const ChannelLlrs& llrs,
                      const BitVec* known_bits = nullptr,
                      const TraceFn& trace = nullptr) const;

 private:
  CodecConfig config_;
  RepetitionMap map_;
  Permutation perm_;
  Index kept_parity_ = 0;
};

}  // namespace itc

#endif  // ITC_CODEC_HPP
