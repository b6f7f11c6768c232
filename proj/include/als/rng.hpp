#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace als {

// SplitMix64 (Steele, Lea, Flood). Only used to expand 64-bit seeds into
// full generator state.
struct SplitMix64 {
  std::uint64_t state = 0;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

/** xoshiro256** 1.0 (Blackman/Vigna), seeded through SplitMix64.
 *
 *  All randomness in the solver goes through this class so that a given
 *  seed produces the same trajectory on every platform; the standard
 *  library distributions are avoided on purpose (they are not portable
 *  across implementations). */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    SplitMix64 sm{seed};
    for (auto& word : state_) word = sm.next();
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Unbiased draw from [0, bound) by masked rejection. bound <= 1 consumes
  // no generator state.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t mask = mask_for(bound - 1);
    std::uint64_t v;
    do {
      v = next() & mask;
    } while (v >= bound);
    return v;
  }

  int index(int bound) { return static_cast<int>(below(static_cast<std::uint64_t>(bound))); }

  // In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    shuffle_range(items.data(), items.size());
  }

  template <typename T>
  void shuffle_range(T* items, std::size_t count) {
    for (std::size_t i = count; i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  // Smallest all-ones mask covering v.
  static std::uint64_t mask_for(std::uint64_t v) {
    std::uint64_t m = v;
    m |= m >> 1;
    m |= m >> 2;
    m |= m >> 4;
    m |= m >> 8;
    m |= m >> 16;
    m |= m >> 32;
    return m;
  }

  std::array<std::uint64_t, 4> state_{};
};

/** Seed for stream `index` of a master seed: base xor index * odd constant.
 *  Injective in the index, and index 0 maps to the base seed itself so a
 *  one-worker run reproduces the plain sequential trajectory. */
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return base ^ (index * 0x9E3779B97F4A7C15ULL);
}

}  // namespace als
