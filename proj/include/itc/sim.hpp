#ifndef ITC_SIM_HPP
#define ITC_SIM_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "itc/codec.hpp"
#include "itc/phy.hpp"
#include "itc/types.hpp"

namespace itc {

struct SimConfig {
  CodecConfig codec;
  Modulation modulation = Modulation::kBpsk;
  std::vector<double> ebno_points;
  std::int64_t min_frame_errors = 100;
  std::int64_t max_frames = 100000;
  std::uint64_t master_seed = 1;
  int workers = 1;
  // Skip the codec entirely: random bits straight to the mapper, decisions
  // from LLR signs. Calibrates the Eb/N0 convention against Q(sqrt(2*Eb/N0)).
  bool uncoded = false;
  // Frames are scheduled in fixed-size chunks and the stop condition is
  // evaluated on chunk boundaries in chunk order, which makes results
  // independent of the worker count.
  std::int64_t chunk_frames = 32;
};

std::string to_string(StopRule rule);
std::optional<StopRule> parse_stop_rule(std::string_view name);

// One CSV row. Counter fields are exact integers so partial results merge
// associatively; derived fields are filled when a point finishes.
struct PointResult {
  double ebno_db = 0.0;
  std::int64_t frames = 0;
  std::int64_t bit_errors = 0;
  std::int64_t frame_errors = 0;
  std::int64_t total_passes = 0;  // SISO passes summed over frames
  double ber = 0.0;
  double fer = 0.0;
  // Decoder passes per frame; reported as passes/2 for all-degree-2
  // profiles, whose classic two-decoder iteration spans two passes.
  double mean_iters = 0.0;
  double throughput = 0.0;
  double nominal_rate = 0.0;
  double measured_rate = 0.0;
  bool censored = false;  // max_frames hit before min_frame_errors
};

struct SweepResult {
  std::vector<PointResult> points;
};

using PointProgressFn = std::function<void(const PointResult&)>;

// Simulates frames at ebno_points[ebno_index] until min_frame_errors frame
// errors accumulate or max_frames frames run. Frame f draws every random
// quantity from child_seed(master_seed, ebno_index, f).
PointResult run_point(const SimConfig& config, std::size_t ebno_index);

SweepResult run_sweep(const SimConfig& config,
                      const PointProgressFn& on_point = nullptr);

// R * log2(M) * (1 - fer), in information bits per channel use.
double throughput(double rate, Modulation mod, double fer);

// log2(1 + 10^(snr_db/10)) bits/s/Hz.
double shannon_capacity(double snr_db);

// snr_db = ebno_db + 10*log10(rate * log2(M)).
double ebno_to_snr(double ebno_db, double rate, Modulation mod);

// Header: ebno_db,frames,bit_errors,frame_errors,ber,fer,mean_iters,
// throughput,nominal_rate,measured_rate,censored. Formatting is locale-free
// and reproducible byte for byte.
void write_csv(const SweepResult& result, std::ostream& out);

// JSON mirror of the CSV rows with the resolved config echoed.
void write_json(const SweepResult& result, const SimConfig& config,
                std::ostream& out);

// Config file with keys {frame_size, profile, puncture, seed, modulation,
// ebno: [start, stop, step], max_iter, stop_rule, min_frame_errors,
// max_frames, workers}; every key optional, defaults above. Throws
// std::invalid_argument naming the offending key.
SimConfig parse_sim_config_text(const std::string& text);
SimConfig load_sim_config(const std::string& path);

// Inclusive [start, stop] grid with the given step.
std::vector<double> ebno_range(double start, double stop, double step);

// Permutation seed used when none is given explicitly, so one master seed
// pins the whole experiment.
std::uint64_t derive_interleaver_seed(std::uint64_t master_seed);

}  // namespace itc

#endif  // ITC_SIM_HPP
