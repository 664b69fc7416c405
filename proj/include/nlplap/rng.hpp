#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace nlplap {

// Finalizer of splitmix64; full-period bijective mixer on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// splitmix64 counter generator.  All randomness in the library flows through
// this type: the byte stream is pinned by this header alone, so a (seed,
// stream label) pair replays identically across builds.  Gaussians come from
// an explicit Box-Muller transform rather than std::normal_distribution,
// whose output is implementation-defined.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    return mix64(z);
  }

  // Uniform on [0,1), 53-bit resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1]; safe under log().
  double uniform_pos() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

  // Standard normal via Box-Muller; consumes two uniforms per pair.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Named substream derivation: one user-facing seed, independent streams per
// purpose ("nodes", "edges", "noise", ...) and per index (row, replication).
inline std::uint64_t derive_stream(std::uint64_t seed, std::string_view label) {
  return mix64(seed ^ fnv1a64(label));
}

inline std::uint64_t derive_stream(std::uint64_t seed, std::string_view label,
                                   std::uint64_t index) {
  return mix64(derive_stream(seed, label) ^ mix64(index + 0x9e3779b97f4a7c15ULL));
}

}  // namespace nlplap
