#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace stablecone {

/// SplitMix64 finalizer; used to derive independent engine seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seeded random source with a fully specified algorithm: a std::mt19937_64
/// engine whose seed is splitmix64(seed) xor splitmix64(stream + 1). Range
/// reduction is done here (not by <random> distributions), so a given
/// (seed, stream) pair yields the same sequence on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, n) by rejection; n must be positive.
  std::size_t uniform_index(std::size_t n);
  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();

  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t k = items.size(); k > 1; --k) {
      std::swap(items[k - 1], items[uniform_index(k)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace stablecone
