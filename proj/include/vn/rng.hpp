#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace vn {

// SplitMix64 step; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t& state);

// Seed for stream `stream` of replicate `index` under `master`. Streams of
// different (index, stream) pairs are decorrelated by SplitMix64 mixing, so a
// replicate's randomness never depends on which worker runs it.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                          std::uint64_t stream = 0);

// Portable PRNG. Only the raw 64-bit output of mt19937_64 is used (it is
// fully specified by the standard); the distributions below are
// implemented here so results are bit-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace vn
