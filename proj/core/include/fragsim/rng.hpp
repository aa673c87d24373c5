#pragma once

#include <cstdint>
#include <random>

namespace fragsim {

/// Identifies one replica's random stream.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t replica_index = 0;

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

/// SplitMix64 finalizer (Stafford variant 13): a bijective avalanche on 64 bits.
constexpr std::uint64_t avalanche64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

/// Stream seed for a replica:
///   avalanche64(master_seed ^ avalanche64(replica_index + 0x9E3779B97F4A7C15)).
/// Part of the reproducibility contract; do not change without bumping the
/// CSV schema version.
constexpr std::uint64_t derive_stream_seed(const SeedSpec& seed) noexcept {
  return avalanche64(seed.master_seed ^ avalanche64(seed.replica_index + 0x9E3779B97F4A7C15ULL));
}

/// Per-replica generator. Draws are defined bit-for-bit by std::mt19937_64
/// and the inverse-CDF transforms below, so streams are portable.
class Rng {
 public:
  explicit Rng(const SeedSpec& seed) : engine_(derive_stream_seed(seed)) {}

  /// Uniform on [0,1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard exponential by inversion: -log(1 - U), U in [0,1).
  double exponential() noexcept;

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fragsim
