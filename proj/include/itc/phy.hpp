#ifndef ITC_PHY_HPP
#define ITC_PHY_HPP

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "itc/rng.hpp"
#include "itc/siso.hpp"
#include "itc/types.hpp"

namespace itc {

enum class Modulation { kBpsk, kQpsk, kQam16, kQam64 };

int bits_per_symbol(Modulation mod);
std::string to_string(Modulation mod);
// Accepts "bpsk", "qpsk", "16qam", "64qam" (case-insensitive).
std::optional<Modulation> parse_modulation(std::string_view name);

// Gray-labeled square constellations with unit average energy. Square QAM
// is separable: each real axis carries bits_per_axis() bits with its own
// Gray amplitude ladder, label 0...0 on the most positive level and the
// leading bit acting as the sign. A symbol's first half of bits selects the
// in-phase level, the second half the quadrature level; BPSK uses the real
// axis only.
class Constellation {
 public:
  static const Constellation& get(Modulation mod);

  Modulation modulation() const { return mod_; }
  int bits_per_symbol() const { return bps_; }
  int bits_per_axis() const { return axis_bits_; }
  bool is_real() const { return mod_ == Modulation::kBpsk; }
  Index size() const { return Index{1} << bps_; }

  // Amplitude for each axis label, already energy-normalized.
  const std::vector<double>& axis_levels() const { return axis_levels_; }

  // Point for a full symbol label (bits MSB-first, I bits then Q bits).
  std::complex<double> point(unsigned label) const;

  double average_energy() const;

 private:
  explicit Constellation(Modulation mod);

  Modulation mod_;
  int bps_;
  int axis_bits_;
  std::vector<double> axis_levels_;
};

struct MappedFrame {
  CxVec symbols;
  int pad_bits = 0;  // zero bits appended to fill the last symbol
};

// Consumes bits in transmission order, log2(M) per symbol, zero-padding the
// final partial symbol.
MappedFrame map_bits(const BitVec& bits, const Constellation& constellation);

// Noise variance per real dimension for unit-energy symbols:
// 1 / (2 * rate * bits_per_symbol * 10^(ebno_db/10)).
double noise_sigma2(double ebno_db, double rate, int bits_per_symbol);

// Adds zero-mean Gaussian noise with variance sigma2 per real dimension;
// the imaginary part stays untouched when complex_noise is false. Per
// symbol the real draw comes first, so streams are reproducible.
CxVec awgn(const CxVec& symbols, double sigma2, bool complex_noise,
           RngStream& rng);

// Exact per-bit LLRs (max-log selectable), one value per mapped bit
// including any pad positions; BPSK reduces to 2y/sigma2. Square QAM is
// demapped per axis.
LlrVec demap(const CxVec& received, const Constellation& constellation,
             double sigma2, MaxStarMode mode = MaxStarMode::kExact);

}  // namespace itc

#endif  // ITC_PHY_HPP
