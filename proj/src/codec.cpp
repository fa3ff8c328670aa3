#include "itc/codec.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

namespace itc {

namespace {

void check_length(const char* what, Index got, Index want) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + " length " +
                                std::to_string(got) + ", expected " +
                                std::to_string(want));
  }
}

}  // namespace

LlrVec extrinsic_combine(const LlrVec& extrinsic, const RepetitionMap& map) {
  check_length("extrinsic_combine: extrinsic", extrinsic.size(),
               map.repeated_length());
  LlrVec out(extrinsic.size());
  for (Index j = 0; j < map.source_count; ++j) {
    const Index start = map.group_start[static_cast<std::size_t>(j)];
    const int d = map.degree_of[static_cast<std::size_t>(j)];
    if (d < 2) {
      throw std::invalid_argument("extrinsic_combine: copy group below 2");
    }
    double sum = 0.0;
    for (int k = 0; k < d; ++k) sum += extrinsic[start + k];
    for (int k = 0; k < d; ++k) out[start + k] = sum - extrinsic[start + k];
#ifndef NDEBUG
    double out_sum = 0.0;
    for (int k = 0; k < d; ++k) out_sum += out[start + k];
    assert(std::abs(out_sum - (d - 1) * sum) <=
           1e-9 * std::max(1.0, std::abs(sum)));
#endif
  }
  return out;
}

LlrVec source_app(const LlrVec& channel_systematic, const LlrVec& extrinsic,
                  const RepetitionMap& map, bool channel_llr_per_copy) {
  check_length("source_app: systematic", channel_systematic.size(),
               map.source_count);
  check_length("source_app: extrinsic", extrinsic.size(),
               map.repeated_length());
  LlrVec app(map.source_count);
  for (Index j = 0; j < map.source_count; ++j) {
    const Index start = map.group_start[static_cast<std::size_t>(j)];
    const int d = map.degree_of[static_cast<std::size_t>(j)];
    double sum = 0.0;
    for (int k = 0; k < d; ++k) sum += extrinsic[start + k];
    const double channel = channel_llr_per_copy
                               ? channel_systematic[j] * d
                               : channel_systematic[j];
    app[j] = channel + sum;
  }
  return app;
}

BitVec hard_decisions(const LlrVec& app) {
  BitVec decisions(app.size());
  for (Index i = 0; i < app.size(); ++i) {
    decisions[i] = app[i] >= 0.0 ? 0 : 1;
  }
  return decisions;
}

Codec::Codec(CodecConfig config) : config_(std::move(config)) {
  if (config_.frame_size < 1) {
    throw std::invalid_argument("codec: frame_size must be at least 1");
  }
  if (config_.max_iterations < 1) {
    throw std::invalid_argument("codec: max_iterations must be at least 1");
  }
  require_valid(config_.profile);
  map_ = realize(config_.profile, config_.frame_size);
  perm_ = Permutation::generate(map_.repeated_length(),
                                config_.interleaver_seed);
  kept_parity_ = config_.pattern.keep_count(map_.repeated_length());
}

double Codec::nominal_rate() const {
  return code_rate(config_.profile, config_.pattern);
}

double Codec::measured_rate() const {
  return static_cast<double>(config_.frame_size) /
         static_cast<double>(transmitted_length());
}

EncodedFrame Codec::encode(const BitVec& bits) const {
  check_length("encode: input", bits.size(), config_.frame_size);
  const BitVec repeated = repeat_bits(bits, map_);
  const BitVec interleaved = perm_.apply(repeated);
  const RscOutput rsc = rsc_encode(interleaved);

  EncodedFrame frame;
  frame.systematic = bits;
  frame.parity = puncture(rsc.parity, config_.pattern);
  for (int i = 0; i < Trellis::kMemory; ++i) {
    frame.tail[static_cast<std::size_t>(i)] =
        rsc.tail_systematic[static_cast<std::size_t>(i)];
    frame.tail[static_cast<std::size_t>(i + Trellis::kMemory)] =
        rsc.tail_parity[static_cast<std::size_t>(i)];
  }
  frame.transmitted_length = transmitted_length();
  return frame;
}

DecodeResult Codec::decode(const ChannelLlrs& llrs, const BitVec* known_bits,
                           const TraceFn& trace) const {
  check_length("decode: systematic", llrs.systematic.size(),
               config_.frame_size);
  check_length("decode: parity", llrs.parity.size(), kept_parity_);
  if (config_.stop_rule == StopRule::kGenie) {
    if (known_bits == nullptr) {
      throw std::invalid_argument("decode: genie rule needs known bits");
    }
    check_length("decode: known bits", known_bits->size(),
                 config_.frame_size);
  }

  const LlrVec sys_source = clamp_llr(llrs.systematic);
  LlrVec sys_repeated = repeat_stream<double>(sys_source, map_);
  if (config_.scale_repeated_llrs) {
    for (Index p = 0; p < sys_repeated.size(); ++p) {
      const auto& slot = map_.layout[static_cast<std::size_t>(p)];
      sys_repeated[p] /=
          map_.degree_of[static_cast<std::size_t>(slot.source)];
    }
  }

  SisoInput siso;
  siso.systematic = perm_.apply(sys_repeated);
  siso.parity = depuncture(clamp_llr(llrs.parity), config_.pattern,
                           map_.repeated_length());
  siso.apriori = LlrVec::Zero(map_.repeated_length());
  for (int i = 0; i < Trellis::kMemory; ++i) {
    siso.tail_systematic[static_cast<std::size_t>(i)] = std::clamp(
        llrs.tail[static_cast<std::size_t>(i)], -kLlrMax, kLlrMax);
    siso.tail_parity[static_cast<std::size_t>(i)] = std::clamp(
        llrs.tail[static_cast<std::size_t>(i + Trellis::kMemory)], -kLlrMax,
        kLlrMax);
  }

  // Stable-decisions baseline: what the channel alone would decide.
  BitVec previous = hard_decisions(sys_source);

  DecodeResult result;
  for (int pass = 1; pass <= config_.max_iterations; ++pass) {
    const SisoOutput out =
        log_map_decode(siso, Trellis::instance(), config_.max_star_mode);
    const LlrVec ext_source = clamp_llr(perm_.apply_inverse(out.extrinsic));
    if (trace) trace(pass, ext_source);

    result.final_app = source_app(sys_source, ext_source, map_,
                                  config_.decision_channel_llr_per_copy);
    result.decisions = hard_decisions(result.final_app);
    result.iterations_used = pass;

    switch (config_.stop_rule) {
      case StopRule::kFixed:
        break;
      case StopRule::kStableDecisions:
        if ((result.decisions == previous).all()) result.converged = true;
        previous = result.decisions;
        break;
      case StopRule::kGenie:
        if ((result.decisions == *known_bits).all()) result.converged = true;
        break;
    }
    if (result.converged || pass == config_.max_iterations) break;

    siso.apriori = clamp_llr(perm_.apply(extrinsic_combine(ext_source, map_)));
  }
  return result;
}

}  // namespace itc
