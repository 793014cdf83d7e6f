// Counter-based deterministic random generator.
//
// Every random draw in the library is a pure function of (seed, stream label,
// counter).  There is no hidden global state and no ambient entropy, so any
// computation that records its seed can be replayed bit-for-bit.

#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace gmv {

// 64-bit FNV-1a, used to derive stream seeds from human-readable labels.
constexpr std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Stateless splitmix64-style mixer: maps (seed, counter) to a well-scrambled
// 64-bit word.  Used directly as a counter-based generator.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Counter-based RNG.  Copies are independent replays; advancing one copy does
// not affect another.  `stream` isolates independent uses under one user seed.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::string_view stream = "")
      : key_(mix64(seed ^ fnv1a(stream))), counter_(0) {}

  CounterRng substream(std::string_view label) const {
    CounterRng r(*this);
    r.key_ = mix64(key_ ^ fnv1a(label));
    r.counter_ = 0;
    return r;
  }

  std::uint64_t next_u64() { return mix64(key_ + 0x632be59bd9b4e019ull * ++counter_); }

  // Uniform double in [0, 1) with 53 random mantissa bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform integer in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  // Standard normal via Box-Muller on two counter draws.
  double next_gaussian();

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

inline double CounterRng::next_gaussian() {
  // Box-Muller; u is kept away from zero so the log is finite.
  double u = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  double v = next_double();
  constexpr double two_pi = 6.283185307179586476925286766559;
  double r = std::sqrt(-2.0 * std::log(u));
  return r * std::cos(two_pi * v);
}

}  // namespace gmv
