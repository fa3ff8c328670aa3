#ifndef ITC_RNG_HPP
#define ITC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace itc {

// SplitMix64 finalizer, used only to derive seeds from seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed of the independent random stream for frame `frame` of sweep point
// `ebno_index`. Every frame gets its own stream, so results do not depend
// on which worker simulates it or in which order.
constexpr std::uint64_t child_seed(std::uint64_t master_seed,
                                   std::uint64_t ebno_index,
                                   std::uint64_t frame) {
  return splitmix64(splitmix64(splitmix64(master_seed) + ebno_index) + frame);
}

// Deterministic random stream around std::mt19937_64. The raw engine is
// pinned by the C++ standard; the integer and Gaussian draws below are
// implemented here because std::uniform_int_distribution and
// std::normal_distribution are implementation-defined and would break
// golden vectors across platforms.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, n) by rejection sampling. n must be nonzero.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t x = eng_();
      if (x >= threshold) return x % n;
    }
  }

  int next_bit() { return static_cast<int>(eng_() >> 63); }

  // Uniform double in (0, 1]; never returns 0, so it is safe under log.
  double next_unit() {
    return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller. The second value of each pair is cached.
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace itc

#endif  // ITC_RNG_HPP
