#ifndef ITC_PROFILE_HPP
#define ITC_PROFILE_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "itc/types.hpp"

namespace itc {

// One group of the non-uniform repetition: a fraction of the information
// bits that is copied `degree` times before the constituent encoder.
struct DegreeEntry {
  int degree = 0;
  double fraction = 0.0;
};

class DegreeProfile {
 public:
  DegreeProfile() = default;
  explicit DegreeProfile(std::vector<DegreeEntry> entries)
      : entries_(std::move(entries)) {}
  DegreeProfile(std::initializer_list<DegreeEntry> entries)
      : entries_(entries) {}

  // Parses "2:0.888,8:0.06,9:0.052". Syntax only; throws
  // std::invalid_argument naming the bad token. Semantic constraints are
  // checked by validate().
  static DegreeProfile parse(const std::string& literal);

  const std::vector<DegreeEntry>& entries() const { return entries_; }
  std::string to_literal() const;

  // Every information bit repeated exactly twice: the regular-turbo
  // equivalent structure.
  bool is_regular() const;

 private:
  std::vector<DegreeEntry> entries_;
};

// nullopt when the profile constraints hold: each degree >= 2, degrees
// distinct, each fraction in (0, 1], fractions summing to 1 within 1e-9.
// Otherwise a message naming the violated constraint.
std::optional<std::string> validate(const DegreeProfile& profile);

// Throws std::invalid_argument with the validation message when invalid.
void require_valid(const DegreeProfile& profile);

// Mean number of repetitions per information bit.
double average_degree(const DegreeProfile& profile);

// Cyclic keep(1)/delete(0) mask over the parity stream. Phase is always 0
// at parity position 0. Tail parity never passes through a pattern.
class PuncturePattern {
 public:
  PuncturePattern() : mask_{1} {}
  explicit PuncturePattern(std::vector<std::uint8_t> mask);

  // Parses a bitstring such as "11101101110".
  static PuncturePattern parse(const std::string& bits);

  const std::vector<std::uint8_t>& mask() const { return mask_; }
  std::string to_literal() const;

  Index period() const { return static_cast<Index>(mask_.size()); }
  bool keeps(Index position) const {
    return mask_[static_cast<std::size_t>(position % period())] != 0;
  }

  // Fraction of parity bits deleted (f0) and theta = 1/(2 - f0).
  double punctured_fraction() const;
  double theta() const;

  // Number of keep positions among the first full_length stream positions.
  Index keep_count(Index full_length) const;

 private:
  std::vector<std::uint8_t> mask_;
};

// Nominal code rate R = 1 / (1 + avg_degree * (1 - f0)); tail overhead is
// excluded, the simulator reports the measured rate separately.
double code_rate(const DegreeProfile& profile, const PuncturePattern& pattern);

// Realization of a profile over a concrete frame: the degree of each source
// bit and where its copies land in the repeated stream. Copies of source
// bit j are contiguous and in source order.
struct RepetitionMap {
  struct Slot {
    Index source = 0;
    int copy = 0;
  };

  Index source_count = 0;
  std::vector<int> degree_of;      // per source bit
  std::vector<Index> group_start;  // start of each source bit's copy block
  std::vector<Slot> layout;        // repeated position -> (source, copy)

  Index repeated_length() const { return static_cast<Index>(layout.size()); }
};

// Group sizes are the largest-remainder rounding of fraction * frame_size,
// remainder ties resolved toward the larger degree. Degrees are assigned to
// source positions in ascending order: positions 0..n2-1 get the smallest
// degree, the next block the next degree, and so on. Which bits end up well
// protected is decided by the interleaver, not here.
RepetitionMap realize(const DegreeProfile& profile, Index frame_size);

template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> repeat_stream(
    const Eigen::Array<Scalar, Eigen::Dynamic, 1>& source,
    const RepetitionMap& map) {
  if (source.size() != map.source_count) {
    throw std::invalid_argument("repeat_stream: source length " +
                                std::to_string(source.size()) +
                                " != map source_count " +
                                std::to_string(map.source_count));
  }
  Eigen::Array<Scalar, Eigen::Dynamic, 1> out(map.repeated_length());
  for (Index p = 0; p < out.size(); ++p) {
    out[p] = source[map.layout[static_cast<std::size_t>(p)].source];
  }
  return out;
}

inline BitVec repeat_bits(const BitVec& bits, const RepetitionMap& map) {
  return repeat_stream<std::uint8_t>(bits, map);
}

// Keeps position p iff mask[p mod period] = 1, starting at phase 0.
template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> puncture(
    const Eigen::Array<Scalar, Eigen::Dynamic, 1>& stream,
    const PuncturePattern& pattern) {
  Eigen::Array<Scalar, Eigen::Dynamic, 1> out(pattern.keep_count(stream.size()));
  Index k = 0;
  for (Index p = 0; p < stream.size(); ++p) {
    if (pattern.keeps(p)) out[k++] = stream[p];
  }
  return out;
}

// Receiver inverse of puncture: kept LLRs return to their original
// positions, deleted positions become exact-zero erasures.
LlrVec depuncture(const LlrVec& kept, const PuncturePattern& pattern,
                  Index full_length);

}  // namespace itc

#endif  // ITC_PROFILE_HPP
