#include "corpusmix/hashing.hpp"

namespace corpusmix {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis) noexcept {
  constexpr std::uint64_t kPrime = 0x100000001b3ULL;
  std::uint64_t hash = basis;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= kPrime;
  }
  return hash;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view key, std::uint64_t ordinal) noexcept {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ fnv1a64(key));
  return mix64(h ^ ordinal);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  // rejection sampling on the top of the range keeps the draw unbiased
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

}  // namespace corpusmix
