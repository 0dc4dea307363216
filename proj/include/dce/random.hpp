#pragma once

// Reproducible per-trajectory random streams. Trajectory i of an ensemble
// draws from std::mt19937_64 seeded with splitmix64-mixed (master_seed, i),
// so results do not depend on execution order or thread count.

#include <cstdint>
#include <random>

namespace dce {

inline constexpr const char* kRngAlgorithm = "mt19937_64 seeded by splitmix64(master_seed, index)";

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index) {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1) from the top 53 bits.
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dce
