#include "itc/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "itc/rng.hpp"

namespace itc {

std::string to_string(StopRule rule) {
  switch (rule) {
    case StopRule::kFixed: return "fixed";
    case StopRule::kStableDecisions: return "stable-decisions";
    case StopRule::kGenie: return "genie";
  }
  throw std::logic_error("to_string: bad stop rule");
}

std::optional<StopRule> parse_stop_rule(std::string_view name) {
  if (name == "fixed") return StopRule::kFixed;
  if (name == "stable-decisions") return StopRule::kStableDecisions;
  if (name == "genie") return StopRule::kGenie;
  return std::nullopt;
}

namespace {

struct Counters {
  std::int64_t frames = 0;
  std::int64_t bit_errors = 0;
  std::int64_t frame_errors = 0;
  std::int64_t passes = 0;

  Counters& operator+=(const Counters& other) {
    frames += other.frames;
    bit_errors += other.bit_errors;
    frame_errors += other.frame_errors;
    passes += other.passes;
    return *this;
  }
};

BitVec random_bits(Index n, RngStream& rng) {
  BitVec bits(n);
  for (Index i = 0; i < n; ++i) bits[i] = rng.next_bit();
  return bits;
}

Counters simulate_coded_frame(const Codec& codec,
                              const Constellation& constellation,
                              double sigma2, std::uint64_t seed) {
  RngStream rng(seed);
  const Index k = codec.frame_size();
  const BitVec bits = random_bits(k, rng);
  const EncodedFrame enc = codec.encode(bits);

  BitVec tx(enc.transmitted_length);
  tx.segment(0, k) = enc.systematic;
  tx.segment(k, enc.parity.size()) = enc.parity;
  for (int i = 0; i < 6; ++i) {
    tx[k + enc.parity.size() + i] = enc.tail[static_cast<std::size_t>(i)];
  }

  const MappedFrame mapped = map_bits(tx, constellation);
  const CxVec received =
      awgn(mapped.symbols, sigma2, !constellation.is_real(), rng);
  const LlrVec llr = demap(received, constellation, sigma2,
                           codec.config().max_star_mode);

  ChannelLlrs channel;
  channel.systematic = llr.segment(0, k);
  channel.parity = llr.segment(k, enc.parity.size());
  for (int i = 0; i < 6; ++i) {
    channel.tail[static_cast<std::size_t>(i)] =
        llr[k + enc.parity.size() + i];
  }

  const DecodeResult decoded = codec.decode(channel, &bits);

  Counters c;
  c.frames = 1;
  c.bit_errors = (decoded.decisions != bits).count();
  c.frame_errors = c.bit_errors > 0 ? 1 : 0;
  c.passes = decoded.iterations_used;
  return c;
}

Counters simulate_uncoded_frame(Index k, const Constellation& constellation,
                                double sigma2, std::uint64_t seed) {
  RngStream rng(seed);
  const BitVec bits = random_bits(k, rng);
  const MappedFrame mapped = map_bits(bits, constellation);
  const CxVec received =
      awgn(mapped.symbols, sigma2, !constellation.is_real(), rng);
  const LlrVec llr = demap(received, constellation, sigma2);

  Counters c;
  c.frames = 1;
  for (Index i = 0; i < k; ++i) {
    const std::uint8_t decision = llr[i] >= 0.0 ? 0 : 1;
    if (decision != bits[i]) ++c.bit_errors;
  }
  c.frame_errors = c.bit_errors > 0 ? 1 : 0;
  return c;
}

void validate_sim_config(const SimConfig& config) {
  if (config.ebno_points.empty()) {
    throw std::invalid_argument("sim: no Eb/N0 points");
  }
  if (config.min_frame_errors < 1) {
    throw std::invalid_argument("sim: min_frame_errors must be at least 1");
  }
  if (config.max_frames < 1) {
    throw std::invalid_argument("sim: max_frames must be at least 1");
  }
  if (config.workers < 1) {
    throw std::invalid_argument("sim: workers must be at least 1");
  }
  if (config.chunk_frames < 1) {
    throw std::invalid_argument("sim: chunk_frames must be at least 1");
  }
  if (config.codec.frame_size < 1) {
    throw std::invalid_argument("sim: frame_size must be at least 1");
  }
}

}  // namespace

PointResult run_point(const SimConfig& config, std::size_t ebno_index) {
  validate_sim_config(config);
  if (ebno_index >= config.ebno_points.size()) {
    throw std::invalid_argument("run_point: Eb/N0 index out of range");
  }
  const double ebno_db = config.ebno_points[ebno_index];
  const Constellation& constellation = Constellation::get(config.modulation);
  const Index k = config.codec.frame_size;

  std::optional<Codec> codec;
  double rate = 1.0;
  if (!config.uncoded) {
    codec.emplace(config.codec);
    rate = codec->nominal_rate();
  }
  const double sigma2 =
      noise_sigma2(ebno_db, rate, constellation.bits_per_symbol());

  const std::int64_t chunk = config.chunk_frames;
  const std::int64_t num_chunks = (config.max_frames + chunk - 1) / chunk;

  // Chunks are merged strictly in index order and the error budget is
  // checked on each merged boundary, so the set of counted frames does not
  // depend on how many workers ran or how they finished.
  std::atomic<std::int64_t> next_chunk{0};
  std::atomic<bool> stop{false};
  std::mutex merge_mutex;
  std::map<std::int64_t, Counters> pending;
  std::int64_t merged = 0;
  Counters total;
  bool budget_met = false;

  auto worker = [&]() {
    while (!stop.load(std::memory_order_relaxed)) {
      const std::int64_t c = next_chunk.fetch_add(1);
      if (c >= num_chunks) return;
      const std::int64_t first = c * chunk;
      const std::int64_t last = std::min(config.max_frames, first + chunk);
      Counters local;
      for (std::int64_t f = first; f < last; ++f) {
        const std::uint64_t seed =
            child_seed(config.master_seed, ebno_index,
                       static_cast<std::uint64_t>(f));
        if (config.uncoded) {
          local += simulate_uncoded_frame(k, constellation, sigma2, seed);
        } else {
          local += simulate_coded_frame(*codec, constellation, sigma2, seed);
        }
        // Once the point is closed nothing further gets merged, so an
        // unfinished chunk can be abandoned.
        if (stop.load(std::memory_order_relaxed)) return;
      }
      std::lock_guard<std::mutex> lock(merge_mutex);
      if (budget_met) return;
      pending.emplace(c, local);
      while (!pending.empty() && pending.begin()->first == merged) {
        total += pending.begin()->second;
        pending.erase(pending.begin());
        ++merged;
        if (total.frame_errors >= config.min_frame_errors) {
          budget_met = true;
          stop.store(true, std::memory_order_relaxed);
          return;
        }
      }
    }
  };

  if (config.workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(config.workers));
    for (int w = 0; w < config.workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  PointResult r;
  r.ebno_db = ebno_db;
  r.frames = total.frames;
  r.bit_errors = total.bit_errors;
  r.frame_errors = total.frame_errors;
  r.total_passes = total.passes;
  r.ber = static_cast<double>(total.bit_errors) /
          (static_cast<double>(total.frames) * static_cast<double>(k));
  r.fer = static_cast<double>(total.frame_errors) /
          static_cast<double>(total.frames);
  if (config.uncoded) {
    r.mean_iters = 0.0;
  } else {
    r.mean_iters = static_cast<double>(total.passes) /
                   static_cast<double>(total.frames);
    if (config.codec.profile.is_regular()) r.mean_iters /= 2.0;
  }
  r.nominal_rate = rate;
  r.measured_rate = config.uncoded ? 1.0 : codec->measured_rate();
  r.throughput = throughput(rate, config.modulation, r.fer);
  r.censored = total.frame_errors < config.min_frame_errors;
  return r;
}

SweepResult run_sweep(const SimConfig& config, const PointProgressFn& on_point) {
  validate_sim_config(config);
  SweepResult result;
  result.points.reserve(config.ebno_points.size());
  for (std::size_t i = 0; i < config.ebno_points.size(); ++i) {
    result.points.push_back(run_point(config, i));
    if (on_point) on_point(result.points.back());
  }
  return result;
}

double throughput(double rate, Modulation mod, double fer) {
  if (fer < 0.0 || fer > 1.0) {
    throw std::invalid_argument("throughput: fer outside [0, 1]");
  }
  return rate * bits_per_symbol(mod) * (1.0 - fer);
}

double shannon_capacity(double snr_db) {
  return std::log2(1.0 + std::pow(10.0, snr_db / 10.0));
}

double ebno_to_snr(double ebno_db, double rate, Modulation mod) {
  if (!(rate > 0.0)) {
    throw std::invalid_argument("ebno_to_snr: rate must be positive");
  }
  return ebno_db + 10.0 * std::log10(rate * bits_per_symbol(mod));
}

namespace {

std::string format_double(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

nlohmann::json point_to_json(const PointResult& p) {
  return nlohmann::json{{"ebno_db", p.ebno_db},
                        {"frames", p.frames},
                        {"bit_errors", p.bit_errors},
                        {"frame_errors", p.frame_errors},
                        {"ber", p.ber},
                        {"fer", p.fer},
                        {"mean_iters", p.mean_iters},
                        {"throughput", p.throughput},
                        {"nominal_rate", p.nominal_rate},
                        {"measured_rate", p.measured_rate},
                        {"censored", p.censored}};
}

}  // namespace

void write_csv(const SweepResult& result, std::ostream& out) {
  out << "ebno_db,frames,bit_errors,frame_errors,ber,fer,mean_iters,"
         "throughput,nominal_rate,measured_rate,censored\n";
  for (const auto& p : result.points) {
    out << format_double("%.6g", p.ebno_db) << ',' << p.frames << ','
        << p.bit_errors << ',' << p.frame_errors << ','
        << format_double("%.10g", p.ber) << ','
        << format_double("%.10g", p.fer) << ','
        << format_double("%.10g", p.mean_iters) << ','
        << format_double("%.10g", p.throughput) << ','
        << format_double("%.10g", p.nominal_rate) << ','
        << format_double("%.10g", p.measured_rate) << ','
        << (p.censored ? 1 : 0) << '\n';
  }
}

void write_json(const SweepResult& result, const SimConfig& config,
                std::ostream& out) {
  nlohmann::json j;
  j["config"] = {
      {"frame_size", config.codec.frame_size},
      {"profile", config.codec.profile.to_literal()},
      {"puncture", config.codec.pattern.to_literal()},
      {"seed", config.master_seed},
      {"interleaver_seed", config.codec.interleaver_seed},
      {"modulation", to_string(config.modulation)},
      {"ebno_points", config.ebno_points},
      {"max_iter", config.codec.max_iterations},
      {"stop_rule", to_string(config.codec.stop_rule)},
      {"min_frame_errors", config.min_frame_errors},
      {"max_frames", config.max_frames},
      {"workers", config.workers},
      {"uncoded", config.uncoded},
      {"chunk_frames", config.chunk_frames},
  };
  j["points"] = nlohmann::json::array();
  for (const auto& p : result.points) j["points"].push_back(point_to_json(p));
  out << j.dump(2) << '\n';
}

std::vector<double> ebno_range(double start, double stop, double step) {
  if (stop < start) {
    throw std::invalid_argument("ebno range: stop below start");
  }
  if (stop > start && !(step > 0.0)) {
    throw std::invalid_argument("ebno range: step must be positive");
  }
  std::vector<double> points;
  if (stop == start) {
    points.push_back(start);
    return points;
  }
  for (int i = 0;; ++i) {
    const double v = start + i * step;
    if (v > stop + 1e-9) break;
    points.push_back(v);
  }
  return points;
}

std::uint64_t derive_interleaver_seed(std::uint64_t master_seed) {
  // Different stream from the per-frame child seeds on purpose.
  return splitmix64(master_seed ^ 0xA5A5A5A5A5A5A5A5ULL);
}

SimConfig parse_sim_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!j.is_object()) {
    throw std::invalid_argument("config: top level must be an object");
  }

  SimConfig config;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "frame_size") {
        config.codec.frame_size = value.get<Index>();
      } else if (key == "profile") {
        config.codec.profile = DegreeProfile::parse(value.get<std::string>());
        require_valid(config.codec.profile);
      } else if (key == "puncture") {
        config.codec.pattern = PuncturePattern::parse(value.get<std::string>());
      } else if (key == "seed") {
        config.master_seed = value.get<std::uint64_t>();
      } else if (key == "modulation") {
        const auto mod = parse_modulation(value.get<std::string>());
        if (!mod) {
          throw std::invalid_argument("config: unknown modulation '" +
                                      value.get<std::string>() + "'");
        }
        config.modulation = *mod;
      } else if (key == "ebno") {
        if (!value.is_array() || value.size() != 3) {
          throw std::invalid_argument(
              "config: ebno must be [start, stop, step]");
        }
        config.ebno_points =
            ebno_range(value[0].get<double>(), value[1].get<double>(),
                       value[2].get<double>());
      } else if (key == "max_iter") {
        config.codec.max_iterations = value.get<int>();
      } else if (key == "stop_rule") {
        const auto rule = parse_stop_rule(value.get<std::string>());
        if (!rule) {
          throw std::invalid_argument("config: unknown stop_rule '" +
                                      value.get<std::string>() + "'");
        }
        config.codec.stop_rule = *rule;
      } else if (key == "min_frame_errors") {
        config.min_frame_errors = value.get<std::int64_t>();
      } else if (key == "max_frames") {
        config.max_frames = value.get<std::int64_t>();
      } else if (key == "workers") {
        config.workers = value.get<int>();
      } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  config.codec.interleaver_seed = derive_interleaver_seed(config.master_seed);
  return config;
}

SimConfig load_sim_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::invalid_argument("config: cannot read '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_sim_config_text(buffer.str());
}

}  // namespace itc
