#include "itc/phy.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace itc {

int bits_per_symbol(Modulation mod) {
  switch (mod) {
    case Modulation::kBpsk: return 1;
    case Modulation::kQpsk: return 2;
    case Modulation::kQam16: return 4;
    case Modulation::kQam64: return 6;
  }
  throw std::logic_error("bits_per_symbol: bad modulation");
}

std::string to_string(Modulation mod) {
  switch (mod) {
    case Modulation::kBpsk: return "bpsk";
    case Modulation::kQpsk: return "qpsk";
    case Modulation::kQam16: return "16qam";
    case Modulation::kQam64: return "64qam";
  }
  throw std::logic_error("to_string: bad modulation");
}

std::optional<Modulation> parse_modulation(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "bpsk") return Modulation::kBpsk;
  if (lower == "qpsk") return Modulation::kQpsk;
  if (lower == "16qam") return Modulation::kQam16;
  if (lower == "64qam") return Modulation::kQam64;
  return std::nullopt;
}

Constellation::Constellation(Modulation mod) : mod_(mod) {
  bps_ = itc::bits_per_symbol(mod);
  axis_bits_ = is_real() ? bps_ : bps_ / 2;
  const int levels = 1 << axis_bits_;

  // i-th most positive amplitude 2^n-1-2i carries the reflected Gray label
  // i ^ (i >> 1), so neighbors differ in one bit and the leading bit flags
  // the sign.
  double mean_sq = 0.0;
  std::vector<double> raw(static_cast<std::size_t>(levels));
  for (int i = 0; i < levels; ++i) {
    const double amp = static_cast<double>(levels - 1 - 2 * i);
    raw[static_cast<std::size_t>(i ^ (i >> 1))] = amp;
    mean_sq += amp * amp;
  }
  mean_sq /= levels;
  const double norm = std::sqrt(is_real() ? mean_sq : 2.0 * mean_sq);
  axis_levels_.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    axis_levels_[i] = raw[i] / norm;
  }
}

const Constellation& Constellation::get(Modulation mod) {
  static const Constellation bpsk(Modulation::kBpsk);
  static const Constellation qpsk(Modulation::kQpsk);
  static const Constellation qam16(Modulation::kQam16);
  static const Constellation qam64(Modulation::kQam64);
  switch (mod) {
    case Modulation::kBpsk: return bpsk;
    case Modulation::kQpsk: return qpsk;
    case Modulation::kQam16: return qam16;
    case Modulation::kQam64: return qam64;
  }
  throw std::logic_error("Constellation::get: bad modulation");
}

std::complex<double> Constellation::point(unsigned label) const {
  if (label >= static_cast<unsigned>(size())) {
    throw std::invalid_argument("Constellation: label out of range");
  }
  if (is_real()) {
    return {axis_levels_[label], 0.0};
  }
  const unsigned mask = (1u << axis_bits_) - 1u;
  return {axis_levels_[(label >> axis_bits_) & mask],
          axis_levels_[label & mask]};
}

double Constellation::average_energy() const {
  double sum = 0.0;
  for (Index label = 0; label < size(); ++label) {
    sum += std::norm(point(static_cast<unsigned>(label)));
  }
  return sum / static_cast<double>(size());
}

MappedFrame map_bits(const BitVec& bits, const Constellation& constellation) {
  const int bps = constellation.bits_per_symbol();
  const Index symbols = (bits.size() + bps - 1) / bps;
  MappedFrame frame;
  frame.symbols.resize(symbols);
  frame.pad_bits = static_cast<int>(symbols * bps - bits.size());
  Index b = 0;
  for (Index s = 0; s < symbols; ++s) {
    unsigned label = 0;
    for (int i = 0; i < bps; ++i, ++b) {
      const unsigned bit = b < bits.size() ? bits[b] : 0u;
      if (bit > 1) {
        throw std::invalid_argument("map_bits: bits must be 0 or 1");
      }
      label = (label << 1) | bit;
    }
    frame.symbols[s] = constellation.point(label);
  }
  return frame;
}

double noise_sigma2(double ebno_db, double rate, int bits_per_symbol) {
  if (!(rate > 0.0)) {
    throw std::invalid_argument("noise_sigma2: rate must be positive");
  }
  if (bits_per_symbol < 1) {
    throw std::invalid_argument("noise_sigma2: bits_per_symbol below 1");
  }
  const double ebno = std::pow(10.0, ebno_db / 10.0);
  return 1.0 / (2.0 * rate * bits_per_symbol * ebno);
}

CxVec awgn(const CxVec& symbols, double sigma2, bool complex_noise,
           RngStream& rng) {
  if (sigma2 < 0.0) {
    throw std::invalid_argument("awgn: negative variance");
  }
  if (sigma2 == 0.0) return symbols;
  const double sigma = std::sqrt(sigma2);
  CxVec out(symbols.size());
  for (Index s = 0; s < symbols.size(); ++s) {
    const double re = symbols[s].real() + sigma * rng.next_gaussian();
    const double im = complex_noise
                          ? symbols[s].imag() + sigma * rng.next_gaussian()
                          : symbols[s].imag();
    out[s] = {re, im};
  }
  return out;
}

LlrVec demap(const CxVec& received, const Constellation& constellation,
             double sigma2, MaxStarMode mode) {
  if (!(sigma2 > 0.0)) {
    throw std::invalid_argument("demap: variance must be positive");
  }
  const int bps = constellation.bits_per_symbol();
  const int axis_bits = constellation.bits_per_axis();
  const auto& levels = constellation.axis_levels();
  const int axes = constellation.is_real() ? 1 : 2;
  const double inv_two_sigma2 = 1.0 / (2.0 * sigma2);

  LlrVec llr(received.size() * bps);
  for (Index s = 0; s < received.size(); ++s) {
    for (int axis = 0; axis < axes; ++axis) {
      const double y =
          axis == 0 ? received[s].real() : received[s].imag();
      for (int i = 0; i < axis_bits; ++i) {
        const unsigned bit_mask = 1u << (axis_bits - 1 - i);
        double num = kNegInf;
        double den = kNegInf;
        for (std::size_t label = 0; label < levels.size(); ++label) {
          const double diff = y - levels[label];
          const double metric = -diff * diff * inv_two_sigma2;
          if ((label & bit_mask) == 0) {
            num = max_star(num, metric, mode);
          } else {
            den = max_star(den, metric, mode);
          }
        }
        llr[s * bps + axis * axis_bits + i] = num - den;
      }
    }
  }
  return llr;
}

}  // namespace itc
