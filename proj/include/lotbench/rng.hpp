#ifndef LOTBENCH_RNG_HPP
#define LOTBENCH_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace lotbench {

// 64-bit FNV-1a. Used for concept ids, seed derivation and artifact
// fingerprints; stable across platforms and runs.
inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

constexpr std::uint64_t fnv1a64(std::string_view data,
                                std::uint64_t state = kFnvOffset) {
  for (char c : data) {
    state ^= static_cast<std::uint8_t>(c);
    state *= kFnvPrime;
  }
  return state;
}

constexpr std::uint64_t fnv1a64_mix(std::uint64_t value, std::uint64_t state) {
  for (int i = 0; i < 8; ++i) {
    state ^= value & 0xffu;
    state *= kFnvPrime;
    value >>= 8;
  }
  return state;
}

// Derives an independent stream seed from a master seed and a label, so
// concurrent stages and per-concept streams cannot collide.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                                 std::uint64_t index = 0) {
  return fnv1a64_mix(index, fnv1a64(label, fnv1a64_mix(master, kFnvOffset)));
}

// Deterministic RNG wrapper. mt19937_64 output is pinned by the standard;
// the bounded-int and shuffle helpers below avoid the unspecified behavior
// of std::uniform_int_distribution and std::shuffle so that artifacts are
// reproducible byte-for-byte on any toolchain.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [lo, hi], inclusive. Rejection sampling, no modulo bias.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(engine_());  // full range
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span);
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return lo + static_cast<std::int64_t>(draw % span);
  }

  std::size_t uniform_index(std::size_t size) {
    return static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(size) - 1));
  }

  bool coin() { return (engine_() & 1u) != 0; }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      std::swap(values[i - 1], values[j]);
    }
  }

  // First `count` elements of a uniform without-replacement sample of
  // indices [0, size). Partial Fisher-Yates.
  std::vector<std::size_t> sample_indices(std::size_t size, std::size_t count) {
    std::vector<std::size_t> pool(size);
    for (std::size_t i = 0; i < size; ++i) pool[i] = i;
    for (std::size_t i = 0; i < count && i < size; ++i) {
      std::size_t j = i + uniform_index(size - i);
      std::swap(pool[i], pool[j]);
    }
    pool.resize(count < size ? count : size);
    return pool;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lotbench

#endif  // LOTBENCH_RNG_HPP
