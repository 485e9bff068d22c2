#pragma once

// Counter-based random streams.
//
// Every random quantity in the library is a pure function of
// (stream key, counter). Stream keys are derived from the user seed plus a
// path of integers naming the consumer (attribute, replicate, scenario ...),
// so work can be split across threads in any order and still reproduce the
// same numbers. Only integer arithmetic is used for the bit stream, which makes
// it identical on every platform.

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string_view>

namespace biasshift::rng {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// FNV-1a, used to turn labels into stream path components.
constexpr std::uint64_t hash_label(std::string_view label) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

// key_0 = mix(seed), key_{i+1} = mix(key_i ^ mix(path_i + gamma)).
constexpr std::uint64_t derive_key(std::uint64_t seed,
                                   std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t key = mix64(seed);
  for (std::uint64_t p : path) key = mix64(key ^ mix64(p + kGoldenGamma));
  return key;
}

// Stream path tags. Values are part of the reproducibility contract.
enum StreamTag : std::uint64_t {
  kTagBootstrap = 1,
  kTagSubsample = 2,
  kTagScenario = 3,
};

// Random access view of a stream: bits(i) is the i-th 64-bit output.
class CounterRng {
 public:
  constexpr explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
    return mix64(key_ + (counter + 1) * kGoldenGamma);
  }

  // Uniform on [0, 1) with 53 random bits.
  constexpr double uniform(std::uint64_t counter) const noexcept {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  constexpr std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t key_;
};

// Sequential cursor over a CounterRng. Satisfies UniformRandomBitGenerator.
class Stream {
 public:
  using result_type = std::uint64_t;

  constexpr explicit Stream(std::uint64_t key) noexcept : rng_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept { return rng_.bits(counter_++); }

  double uniform() noexcept { return rng_.uniform(counter_++); }

  // Unbiased integer in [0, bound), Lemire's multiply-and-reject method.
  std::uint64_t below(std::uint64_t bound) noexcept {
    __extension__ using u128 = unsigned __int128;
    u128 m = static_cast<u128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<u128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  constexpr std::uint64_t position() const noexcept { return counter_; }

 private:
  CounterRng rng_;
  std::uint64_t counter_ = 0;
};

}  // namespace biasshift::rng
