#pragma once

#include <cstdint>

namespace tcl {

/// Deterministic SplitMix64 stream. Every stochastic routine in the library
/// takes one of these explicitly; there is no hidden global state. Streams
/// for independent trials are derived with Rng::child(master, index), which
/// is stable across platforms, so a (seed, config) pair replays bit-exactly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    // multiply-shift with rejection to remove modulo bias
    std::uint64_t x = next_u64();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
    std::uint64_t lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      std::uint64_t threshold = (0ULL - n) % n;
      while (lo < threshold) {
        x = next_u64();
        m = static_cast<unsigned __int128>(x) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  int below_int(int n) { return static_cast<int>(below(static_cast<std::uint64_t>(n))); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool coin() { return (next_u64() >> 63) != 0; }

  /// Seed of an independent child stream; mixes the index through the same
  /// finalizer so derive(s, i) and derive(s, j) are decorrelated for i != j.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
    Rng mixer(seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
    return mixer.next_u64();
  }

  static Rng child(std::uint64_t seed, std::uint64_t index) { return Rng(derive(seed, index)); }

 private:
  std::uint64_t state_;
};

}  // namespace tcl
