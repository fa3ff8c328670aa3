#ifndef ITC_INTERLEAVE_HPP
#define ITC_INTERLEAVE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "itc/types.hpp"

namespace itc {

// Seeded uniform-random permutation. forward()[i] is the destination of
// input position i, so apply() computes out[forward[i]] = in[i].
class Permutation {
 public:
  Permutation() = default;

  // Fisher-Yates with the shared rejection-sampled RngStream, so the same
  // (size, seed) pair gives the same permutation on every platform.
  static Permutation generate(Index size, std::uint64_t seed);

  static Permutation identity(Index size);

  Index size() const { return static_cast<Index>(forward_.size()); }
  const std::vector<Index>& forward() const { return forward_; }
  const std::vector<Index>& inverse() const { return inverse_; }

  template <typename Scalar>
  Eigen::Array<Scalar, Eigen::Dynamic, 1> apply(
      const Eigen::Array<Scalar, Eigen::Dynamic, 1>& in) const {
    check_length(in.size());
    Eigen::Array<Scalar, Eigen::Dynamic, 1> out(in.size());
    for (Index i = 0; i < in.size(); ++i) {
      out[forward_[static_cast<std::size_t>(i)]] = in[i];
    }
    return out;
  }

  template <typename Scalar>
  Eigen::Array<Scalar, Eigen::Dynamic, 1> apply_inverse(
      const Eigen::Array<Scalar, Eigen::Dynamic, 1>& in) const {
    check_length(in.size());
    Eigen::Array<Scalar, Eigen::Dynamic, 1> out(in.size());
    for (Index i = 0; i < in.size(); ++i) {
      out[inverse_[static_cast<std::size_t>(i)]] = in[i];
    }
    return out;
  }

 private:
  void check_length(Index n) const {
    if (n != size()) {
      throw std::invalid_argument("Permutation: input length " +
                                  std::to_string(n) + " != size " +
                                  std::to_string(size()));
    }
  }

  std::vector<Index> forward_;
  std::vector<Index> inverse_;
};

}  // namespace itc

#endif  // ITC_INTERLEAVE_HPP
