#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

// Seed derivation and a deterministic random stream. Every stochastic
// component takes an explicit RandomStream; substreams are derived from a
// master seed by (kind, index), so results do not depend on execution order
// or worker count.

namespace diqss {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t kind,
                                 std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (kind + 1);
  z = mix64(z);
  z += 0x9e3779b97f4a7c15ULL * (index + 1);
  return mix64(z);
}

// Substream kinds used across the toolkit.
inline constexpr std::uint64_t kStreamRound = 1;
inline constexpr std::uint64_t kStreamSecret = 2;
inline constexpr std::uint64_t kStreamHash = 3;
inline constexpr std::uint64_t kStreamTrial = 4;

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n), unbiased via rejection.
  int below(int n) {
    if (n <= 0) throw std::invalid_argument("RandomStream::below: n must be positive");
    const std::uint64_t un = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return static_cast<int>(v % un);
  }

  bool bernoulli(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace diqss
