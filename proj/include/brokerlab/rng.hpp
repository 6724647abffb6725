#pragma once

#include <cstdint>

namespace brokerlab {

/// Counter-based random stream keyed by (experiment seed, replication, round).
/// The key triple fully determines the output sequence, so any replication or
/// round can be regenerated in isolation and parallel episodes never share
/// generator state.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t replication,
            std::uint64_t round) noexcept
      : key_(derive_key(seed, replication, round)) {}

  std::uint64_t next_u64() noexcept { return mix(key_ + (++counter_) * kGamma); }

  /// Uniform draw in [0,1).
  double next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  // murmur3 finalizer
  static std::uint64_t mix(std::uint64_t z) noexcept {
    z ^= z >> 33;
    z *= 0xFF51AFD7ED558CCDull;
    z ^= z >> 33;
    z *= 0xC4CEB9FE1A85EC53ull;
    z ^= z >> 33;
    return z;
  }

  static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t replication,
                                  std::uint64_t round) noexcept {
    std::uint64_t k = mix(seed + kGamma);
    k = mix(k ^ (replication * 0xBF58476D1CE4E5B9ull + 0x94D049BB133111EBull));
    k = mix(k ^ (round * 0x94D049BB133111EBull + 0xBF58476D1CE4E5B9ull));
    return k;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace brokerlab
