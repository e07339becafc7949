#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace cyclemr {

// splitmix64 finalizer; the building block of every seeded hash in the project.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) noexcept {
  return mix64(h ^ mix64(v));
}

template <typename... Ts>
constexpr std::uint64_t hash_values(std::uint64_t h, Ts... vs) noexcept {
  ((h = hash_combine(h, static_cast<std::uint64_t>(vs))), ...);
  return h;
}

__extension__ using uint128 = unsigned __int128;

// Map a 64-bit hash uniformly-enough onto [0, bound) (Lemire's multiply-shift).
constexpr std::uint64_t reduce_range(std::uint64_t h, std::uint64_t bound) noexcept {
  return static_cast<std::uint64_t>((static_cast<uint128>(h) * bound) >> 64);
}

// Platform-stable generator: mt19937_64's output sequence is fixed by the
// standard, the distributions are not, so bounded draws and shuffles are done
// here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  // Unbiased draw from [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= threshold) return x % bound;
    }
  }

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

}  // namespace cyclemr
