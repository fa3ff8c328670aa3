#include "itc/interleave.hpp"

#include <numeric>

#include "itc/rng.hpp"

namespace itc {

Permutation Permutation::generate(Index size, std::uint64_t seed) {
  if (size < 1) {
    throw std::invalid_argument("Permutation: size must be positive");
  }
  Permutation perm;
  perm.forward_.resize(static_cast<std::size_t>(size));
  std::iota(perm.forward_.begin(), perm.forward_.end(), Index{0});
  RngStream rng(seed);
  for (Index i = size - 1; i > 0; --i) {
    const auto j = static_cast<Index>(
        rng.next_below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm.forward_[static_cast<std::size_t>(i)],
              perm.forward_[static_cast<std::size_t>(j)]);
  }
  perm.inverse_.resize(static_cast<std::size_t>(size));
  for (Index i = 0; i < size; ++i) {
    perm.inverse_[static_cast<std::size_t>(
        perm.forward_[static_cast<std::size_t>(i)])] = i;
  }
  return perm;
}

Permutation Permutation::identity(Index size) {
  if (size < 1) {
    throw std::invalid_argument("Permutation: size must be positive");
  }
  Permutation perm;
  perm.forward_.resize(static_cast<std::size_t>(size));
  std::iota(perm.forward_.begin(), perm.forward_.end(), Index{0});
  perm.inverse_ = perm.forward_;
  return perm;
}

}  // namespace itc
