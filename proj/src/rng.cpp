#include "vn/rng.hpp"

#include <limits>

namespace vn {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                          std::uint64_t stream) {
  std::uint64_t state = master;
  std::uint64_t h = splitmix64(state);
  state = h ^ (index * 0xD1B54A32D192ED03ULL);
  h = splitmix64(state);
  state = h ^ (stream * 0x8CB92BA72F3D8DD7ULL);
  return splitmix64(state);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  // Rejection sampling on the top of the range removes modulo bias.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

}  // namespace vn
