#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace curvlab {

/// Seedable generator with keyed substreams. A substream depends only on the
/// seed and its key path, so parallel scheduling never changes the draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  /// Stream identified by (seed, tags...), e.g. (seed, trial, restart).
  static Rng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
    return Rng(derive_seed(seed, tags));
  }

  /// Seed for a derived generator, keyed like stream().
  static std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t key = mix(seed);
    for (std::uint64_t t : tags) key = mix(key ^ (t + 0x9e3779b97f4a7c15ULL));
    return key;
  }

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }

 private:
  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Use-site tags for substreams.
namespace stream_tag {
inline constexpr std::uint64_t kRandomCurvature = 1;
inline constexpr std::uint64_t kRandomInCone = 2;
inline constexpr std::uint64_t kFrameSearch = 3;
inline constexpr std::uint64_t kInvariance = 4;
inline constexpr std::uint64_t kConditionCheck = 5;
inline constexpr std::uint64_t kFingerprint = 6;
inline constexpr std::uint64_t kTrajectory = 7;
}  // namespace stream_tag

}  // namespace curvlab
