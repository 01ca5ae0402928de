#pragma once

#include <cstdint>

namespace keyaudit {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Counter-based stream: the state is derived from (seed, counter) so draws
/// for one pulse are independent of how other pulses are processed.
class CounterRng {
public:
  CounterRng(std::uint64_t seed, std::uint64_t counter)
      : state_(splitmix64(splitmix64(seed) ^ (counter * 0xd1342543de82ef95ull +
                                              0x2545f4914f6cdd1dull))) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return next_double() < p; }

  int bit() { return static_cast<int>(next_u64() & 1u); }

private:
  std::uint64_t state_;
};

}  // namespace keyaudit
