#include <chrono>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "itc/codec.hpp"
#include "itc/phy.hpp"
#include "itc/rng.hpp"
#include "itc/sim.hpp"
#include "selftest.hpp"

#ifndef ITC_DEFAULT_GOLDEN
#define ITC_DEFAULT_GOLDEN "tests/golden/rsc_impulse.txt"
#endif

namespace {

using namespace itc;

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

double parse_double(const std::string& token) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad number '" + token + "'");
  }
  if (used != token.size()) {
    throw std::invalid_argument("bad number '" + token + "'");
  }
  return v;
}

// Accepts "start:stop:step", a comma list "0,0.5,1", or a single value.
std::vector<double> parse_grid(const std::string& text) {
  if (text.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream in(text);
    std::string token;
    while (std::getline(in, token, ':')) parts.push_back(parse_double(token));
    if (parts.size() != 3) {
      throw std::invalid_argument("grid '" + text +
                                  "' must be start:stop:step");
    }
    return ebno_range(parts[0], parts[1], parts[2]);
  }
  std::vector<double> points;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) points.push_back(parse_double(token));
  if (points.empty()) {
    throw std::invalid_argument("grid '" + text + "' is empty");
  }
  return points;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out.good()) {
      std::remove(tmp.c_str());
      throw std::invalid_argument("cannot write '" + tmp + "'");
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::invalid_argument("cannot write '" + path + "'");
  }
}

std::string json_sibling(const std::string& csv_path) {
  const std::string suffix = ".csv";
  if (csv_path.size() > suffix.size() &&
      csv_path.compare(csv_path.size() - suffix.size(), suffix.size(),
                       suffix) == 0) {
    return csv_path.substr(0, csv_path.size() - suffix.size()) + ".json";
  }
  return csv_path + ".json";
}

std::string bits_to_string(const BitVec& bits) {
  std::string s(static_cast<std::size_t>(bits.size()), '0');
  for (Index i = 0; i < bits.size(); ++i) {
    s[static_cast<std::size_t>(i)] = bits[i] ? '1' : '0';
  }
  return s;
}

BitVec random_bits(Index n, RngStream& rng) {
  BitVec bits(n);
  for (Index i = 0; i < n; ++i) bits[i] = rng.next_bit();
  return bits;
}

Modulation require_modulation(const std::string& name) {
  const auto mod = parse_modulation(name);
  if (!mod) throw std::invalid_argument("unknown modulation '" + name + "'");
  return *mod;
}

StopRule require_stop_rule(const std::string& name) {
  const auto rule = parse_stop_rule(name);
  if (!rule) throw std::invalid_argument("unknown stop rule '" + name + "'");
  return *rule;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    atomic_write(out_path, content);
  }
}

struct RateArgs {
  std::string profile;
  std::string puncture = "1";
};

int cmd_rate(const RateArgs& args) {
  const auto profile = DegreeProfile::parse(args.profile);
  require_valid(profile);
  const auto pattern = PuncturePattern::parse(args.puncture);
  std::cout << "avg_degree " << format("%.4f", average_degree(profile)) << '\n'
            << "f0 " << format("%.4f", pattern.punctured_fraction()) << '\n'
            << "theta " << format("%.4f", pattern.theta()) << '\n'
            << "rate " << format("%.4f", code_rate(profile, pattern)) << '\n';
  return 0;
}

struct EncodeArgs {
  Index frame_size = 0;
  std::string profile = "2:1.0";
  std::string puncture = "1";
  std::uint64_t seed = 1;
  std::uint64_t interleaver_seed = 0;
  bool interleaver_seed_set = false;
  std::string out;
};

int cmd_encode(const EncodeArgs& args) {
  CodecConfig cfg;
  cfg.frame_size = args.frame_size;
  cfg.profile = DegreeProfile::parse(args.profile);
  cfg.pattern = PuncturePattern::parse(args.puncture);
  cfg.interleaver_seed = args.interleaver_seed_set
                             ? args.interleaver_seed
                             : derive_interleaver_seed(args.seed);
  const Codec codec(cfg);

  RngStream rng(child_seed(args.seed, 0, 0));
  const BitVec bits = random_bits(cfg.frame_size, rng);
  const EncodedFrame frame = codec.encode(bits);

  std::string tail(6, '0');
  for (std::size_t i = 0; i < 6; ++i) tail[i] = frame.tail[i] ? '1' : '0';

  nlohmann::json j{{"frame_size", cfg.frame_size},
                   {"profile", cfg.profile.to_literal()},
                   {"puncture", cfg.pattern.to_literal()},
                   {"seed", args.seed},
                   {"interleaver_seed", cfg.interleaver_seed},
                   {"nominal_rate", codec.nominal_rate()},
                   {"measured_rate", codec.measured_rate()},
                   {"transmitted_length", frame.transmitted_length},
                   {"systematic", bits_to_string(frame.systematic)},
                   {"parity", bits_to_string(frame.parity)},
                   {"tail", tail}};
  emit(args.out, j.dump(2) + "\n");
  return 0;
}

struct DecodeArgs {
  Index frame_size = 0;
  std::string profile = "2:1.0";
  std::string puncture = "1";
  std::string modulation = "bpsk";
  double ebno_db = 1.5;
  int max_iter = 8;
  std::string stop_rule = "fixed";
  std::uint64_t seed = 1;
  std::uint64_t interleaver_seed = 0;
  bool interleaver_seed_set = false;
  std::string trace_path;
  std::string out;
};

// Simulates one frame end to end so a decode can be examined in isolation:
// random bits, encode, map, noise, demap, iterate.
int cmd_decode(const DecodeArgs& args) {
  CodecConfig cfg;
  cfg.frame_size = args.frame_size;
  cfg.profile = DegreeProfile::parse(args.profile);
  cfg.pattern = PuncturePattern::parse(args.puncture);
  cfg.max_iterations = args.max_iter;
  cfg.stop_rule = require_stop_rule(args.stop_rule);
  cfg.interleaver_seed = args.interleaver_seed_set
                             ? args.interleaver_seed
                             : derive_interleaver_seed(args.seed);
  const Codec codec(cfg);
  const Modulation mod = require_modulation(args.modulation);
  const Constellation& constellation = Constellation::get(mod);

  RngStream rng(child_seed(args.seed, 0, 0));
  const BitVec bits = random_bits(cfg.frame_size, rng);
  const EncodedFrame frame = codec.encode(bits);

  BitVec tx(frame.transmitted_length);
  tx.segment(0, cfg.frame_size) = frame.systematic;
  tx.segment(cfg.frame_size, frame.parity.size()) = frame.parity;
  for (int i = 0; i < 6; ++i) {
    tx[cfg.frame_size + frame.parity.size() + i] =
        frame.tail[static_cast<std::size_t>(i)];
  }

  const double sigma2 = noise_sigma2(args.ebno_db, codec.nominal_rate(),
                                     constellation.bits_per_symbol());
  const MappedFrame mapped = map_bits(tx, constellation);
  const CxVec received =
      awgn(mapped.symbols, sigma2, !constellation.is_real(), rng);
  const LlrVec llr = demap(received, constellation, sigma2);

  ChannelLlrs channel;
  channel.systematic = llr.segment(0, cfg.frame_size);
  channel.parity = llr.segment(cfg.frame_size, frame.parity.size());
  for (int i = 0; i < 6; ++i) {
    channel.tail[static_cast<std::size_t>(i)] =
        llr[cfg.frame_size + frame.parity.size() + i];
  }

  std::ostringstream trace;
  trace << "pass,mean_abs_extrinsic,max_abs_extrinsic,saturated_fraction\n";
  const TraceFn observe = [&](int pass, const LlrVec& ext) {
    const double mean_abs = ext.abs().mean();
    const double max_abs = ext.abs().maxCoeff();
    const double saturated =
        static_cast<double>((ext.abs() >= kLlrMax).count()) /
        static_cast<double>(ext.size());
    trace << pass << ',' << format("%.10g", mean_abs) << ','
          << format("%.10g", max_abs) << ',' << format("%.10g", saturated)
          << '\n';
  };

  const DecodeResult result = codec.decode(
      channel, &bits, args.trace_path.empty() ? TraceFn{} : observe);
  if (!args.trace_path.empty()) atomic_write(args.trace_path, trace.str());

  const auto bit_errors = (result.decisions != bits).count();
  nlohmann::json j{{"frame_size", cfg.frame_size},
                   {"profile", cfg.profile.to_literal()},
                   {"puncture", cfg.pattern.to_literal()},
                   {"modulation", to_string(mod)},
                   {"ebno_db", args.ebno_db},
                   {"sigma2", sigma2},
                   {"seed", args.seed},
                   {"interleaver_seed", cfg.interleaver_seed},
                   {"max_iter", cfg.max_iterations},
                   {"stop_rule", to_string(cfg.stop_rule)},
                   {"iterations_used", result.iterations_used},
                   {"converged", result.converged},
                   {"bit_errors", bit_errors},
                   {"frame_error", bit_errors > 0},
                   {"decisions", bits_to_string(result.decisions)}};
  emit(args.out, j.dump(2) + "\n");
  return 0;
}

struct SweepArgs {
  std::string config_path;
  Index frame_size = 0;
  std::string profile;
  std::string puncture;
  std::string modulation;
  std::string ebno;
  int max_iter = 0;
  std::string stop_rule;
  std::uint64_t seed = 0;
  int workers = 0;
  std::int64_t min_frame_errors = 0;
  std::int64_t max_frames = 0;
  std::uint64_t interleaver_seed = 0;
  bool uncoded = false;
  std::string out = "sweep.csv";
  bool strict = false;
};

struct SweepGiven {
  bool frame_size = false, profile = false, puncture = false;
  bool modulation = false, ebno = false, max_iter = false, stop_rule = false;
  bool seed = false, workers = false, min_frame_errors = false;
  bool max_frames = false, interleaver_seed = false, uncoded = false;
};

int cmd_sweep(const SweepArgs& args, const SweepGiven& given) {
  SimConfig config;
  if (!args.config_path.empty()) {
    config = load_sim_config(args.config_path);
  } else {
    config.codec.interleaver_seed = derive_interleaver_seed(config.master_seed);
  }

  // Inline flags win over the config file.
  if (given.frame_size) config.codec.frame_size = args.frame_size;
  if (given.profile) {
    config.codec.profile = DegreeProfile::parse(args.profile);
    require_valid(config.codec.profile);
  }
  if (given.puncture) {
    config.codec.pattern = PuncturePattern::parse(args.puncture);
  }
  if (given.modulation) config.modulation = require_modulation(args.modulation);
  if (given.ebno) config.ebno_points = parse_grid(args.ebno);
  if (given.max_iter) config.codec.max_iterations = args.max_iter;
  if (given.stop_rule) config.codec.stop_rule = require_stop_rule(args.stop_rule);
  if (given.seed) {
    config.master_seed = args.seed;
    config.codec.interleaver_seed = derive_interleaver_seed(args.seed);
  }
  if (given.workers) config.workers = args.workers;
  if (given.min_frame_errors) config.min_frame_errors = args.min_frame_errors;
  if (given.max_frames) config.max_frames = args.max_frames;
  if (given.interleaver_seed) {
    config.codec.interleaver_seed = args.interleaver_seed;
  }
  if (given.uncoded) config.uncoded = true;

  std::size_t done = 0;
  auto last = std::chrono::steady_clock::now();
  const auto progress = [&](const PointResult& p) {
    const auto now = std::chrono::steady_clock::now();
    const double secs = std::chrono::duration<double>(now - last).count();
    last = now;
    ++done;
    std::fprintf(stderr,
                 "point %zu/%zu ebno=%s dB frames=%lld ber=%s fer=%s "
                 "mean_iters=%s%s (%.1f s)\n",
                 done, config.ebno_points.size(),
                 format("%.4g", p.ebno_db).c_str(),
                 static_cast<long long>(p.frames),
                 format("%.4g", p.ber).c_str(), format("%.4g", p.fer).c_str(),
                 format("%.3g", p.mean_iters).c_str(),
                 p.censored ? " censored" : "", secs);
  };

  const SweepResult result = run_sweep(config, progress);

  std::ostringstream csv;
  write_csv(result, csv);
  atomic_write(args.out, csv.str());

  std::ostringstream json;
  write_json(result, config, json);
  const std::string json_path = json_sibling(args.out);
  atomic_write(json_path, json.str());

  std::cout << "wrote " << args.out << " and " << json_path << '\n';

  if (args.strict) {
    for (const auto& p : result.points) {
      if (p.censored) {
        std::cerr << "strict: point " << format("%.4g", p.ebno_db)
                  << " dB censored (" << p.frame_errors << " frame errors in "
                  << p.frames << " frames)\n";
        return 1;
      }
    }
  }
  return 0;
}

struct CapacityArgs {
  std::string snr = "-2:20:0.5";
  std::string ebno;
  double rate = 0.0;
  bool rate_set = false;
  std::string modulation = "bpsk";
  std::string out;
};

int cmd_capacity(const CapacityArgs& args) {
  std::ostringstream csv;
  if (!args.ebno.empty()) {
    if (!args.rate_set) {
      throw std::invalid_argument("--ebno needs --rate to place the SNR axis");
    }
    const Modulation mod = require_modulation(args.modulation);
    csv << "ebno_db,snr_db,capacity\n";
    for (double ebno : parse_grid(args.ebno)) {
      const double snr = ebno_to_snr(ebno, args.rate, mod);
      csv << format("%.6g", ebno) << ',' << format("%.6g", snr) << ','
          << format("%.10g", shannon_capacity(snr)) << '\n';
    }
  } else {
    csv << "snr_db,capacity\n";
    for (double snr : parse_grid(args.snr)) {
      csv << format("%.6g", snr) << ','
          << format("%.10g", shannon_capacity(snr)) << '\n';
    }
  }
  emit(args.out, csv.str());
  return 0;
}

int cmd_selftest(const std::string& golden_path) {
  const auto results =
      tools::run_selftests(tools::SelftestOptions{golden_path});
  std::size_t passed = 0;
  for (const auto& r : results) {
    std::printf("%s %-32s %8.2f ms%s%s\n", r.passed ? "PASS" : "FAIL",
                r.name.c_str(), r.seconds * 1e3, r.detail.empty() ? "" : ": ",
                r.detail.c_str());
    if (r.passed) ++passed;
  }
  std::printf("%zu/%zu checks passed\n", passed, results.size());
  return passed == results.size() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"irregular turbo codes: non-uniform repetition, one UMTS "
               "recursive systematic code, iterative single-decoder"};
  app.require_subcommand(1);

  RateArgs rate_args;
  auto* rate = app.add_subcommand("rate", "print degree/puncture rate figures");
  rate->add_option("--profile", rate_args.profile,
                   "degree profile, e.g. 2:0.85,7:0.15")
      ->required();
  rate->add_option("--puncture", rate_args.puncture,
                   "cyclic keep/delete mask, e.g. 11101101110");

  EncodeArgs enc_args;
  auto* encode = app.add_subcommand("encode", "encode one random frame");
  encode->add_option("--frame-size", enc_args.frame_size, "information bits")
      ->required();
  encode->add_option("--profile", enc_args.profile, "degree profile");
  encode->add_option("--puncture", enc_args.puncture, "parity mask");
  encode->add_option("--seed", enc_args.seed, "master seed for the bits");
  auto* enc_il = encode->add_option("--interleaver-seed",
                                    enc_args.interleaver_seed,
                                    "override the derived permutation seed");
  encode->add_option("--out", enc_args.out, "JSON output path (default stdout)");

  DecodeArgs dec_args;
  auto* decode = app.add_subcommand(
      "decode", "simulate and decode one frame, optionally tracing passes");
  decode->add_option("--frame-size", dec_args.frame_size, "information bits")
      ->required();
  decode->add_option("--profile", dec_args.profile, "degree profile");
  decode->add_option("--puncture", dec_args.puncture, "parity mask");
  decode->add_option("--mod", dec_args.modulation,
                     "bpsk, qpsk, 16qam or 64qam");
  decode->add_option("--ebno", dec_args.ebno_db, "Eb/N0 in dB");
  decode->add_option("--max-iter", dec_args.max_iter, "decoder passes");
  decode->add_option("--stop-rule", dec_args.stop_rule,
                     "fixed, stable-decisions or genie");
  decode->add_option("--seed", dec_args.seed, "master seed");
  auto* dec_il = decode->add_option("--interleaver-seed",
                                    dec_args.interleaver_seed,
                                    "override the derived permutation seed");
  decode->add_option("--trace", dec_args.trace_path,
                     "write per-pass extrinsic statistics CSV here");
  decode->add_option("--out", dec_args.out, "JSON output path (default stdout)");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand(
      "sweep", "Monte Carlo BER/FER sweep writing CSV and JSON");
  sweep->add_option("--config", sweep_args.config_path, "JSON config file");
  auto* sw_fs = sweep->add_option("--frame-size", sweep_args.frame_size,
                                  "information bits");
  auto* sw_profile =
      sweep->add_option("--profile", sweep_args.profile, "degree profile");
  auto* sw_puncture =
      sweep->add_option("--puncture", sweep_args.puncture, "parity mask");
  auto* sw_mod = sweep->add_option("--mod", sweep_args.modulation,
                                   "bpsk, qpsk, 16qam or 64qam");
  auto* sw_ebno = sweep->add_option(
      "--ebno", sweep_args.ebno, "grid start:stop:step or comma list of dB");
  auto* sw_iter =
      sweep->add_option("--max-iter", sweep_args.max_iter, "decoder passes");
  auto* sw_rule = sweep->add_option("--stop-rule", sweep_args.stop_rule,
                                    "fixed, stable-decisions or genie");
  auto* sw_seed = sweep->add_option("--seed", sweep_args.seed, "master seed");
  auto* sw_workers =
      sweep->add_option("--workers", sweep_args.workers, "worker threads");
  auto* sw_minfe = sweep->add_option("--min-frame-errors",
                                     sweep_args.min_frame_errors,
                                     "frame errors to stop a point");
  auto* sw_maxframes = sweep->add_option("--max-frames",
                                         sweep_args.max_frames,
                                         "frame budget per point");
  auto* sw_il = sweep->add_option("--interleaver-seed",
                                  sweep_args.interleaver_seed,
                                  "override the derived permutation seed");
  auto* sw_uncoded = sweep->add_flag(
      "--uncoded", sweep_args.uncoded,
      "bypass the codec: raw modulated bits, sign decisions");
  sweep->add_option("--out", sweep_args.out, "CSV output path");
  sweep->add_flag("--strict", sweep_args.strict,
                  "exit nonzero when any point is censored");

  CapacityArgs cap_args;
  auto* capacity =
      app.add_subcommand("capacity", "Shannon capacity over an SNR grid");
  capacity->add_option("--snr", cap_args.snr, "SNR grid start:stop:step in dB");
  capacity->add_option("--ebno", cap_args.ebno,
                       "Eb/N0 grid; converted with --rate and --mod");
  auto* cap_rate =
      capacity->add_option("--rate", cap_args.rate, "code rate for --ebno");
  capacity->add_option("--mod", cap_args.modulation, "modulation for --ebno");
  capacity->add_option("--out", cap_args.out, "CSV output path (default stdout)");

  std::string golden_path = ITC_DEFAULT_GOLDEN;
  auto* selftest =
      app.add_subcommand("selftest", "run the built-in consistency checks");
  selftest->add_option("--golden", golden_path, "golden impulse vector file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (rate->parsed()) return cmd_rate(rate_args);
    if (encode->parsed()) {
      enc_args.interleaver_seed_set = enc_il->count() > 0;
      return cmd_encode(enc_args);
    }
    if (decode->parsed()) {
      dec_args.interleaver_seed_set = dec_il->count() > 0;
      return cmd_decode(dec_args);
    }
    if (sweep->parsed()) {
      SweepGiven given;
      given.frame_size = sw_fs->count() > 0;
      given.profile = sw_profile->count() > 0;
      given.puncture = sw_puncture->count() > 0;
      given.modulation = sw_mod->count() > 0;
      given.ebno = sw_ebno->count() > 0;
      given.max_iter = sw_iter->count() > 0;
      given.stop_rule = sw_rule->count() > 0;
      given.seed = sw_seed->count() > 0;
      given.workers = sw_workers->count() > 0;
      given.min_frame_errors = sw_minfe->count() > 0;
      given.max_frames = sw_maxframes->count() > 0;
      given.interleaver_seed = sw_il->count() > 0;
      given.uncoded = sw_uncoded->count() > 0;
      return cmd_sweep(sweep_args, given);
    }
    if (capacity->parsed()) {
      cap_args.rate_set = cap_rate->count() > 0;
      return cmd_capacity(cap_args);
    }
    if (selftest->parsed()) return cmd_selftest(golden_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
