#pragma once

// Counter-based pseudo-random streams. Stream g of a given seed is cheap to
// construct, so the simulation engine can hand every generation its own
// stream and produce identical draws regardless of how work is scheduled.

#include <cstdint>

namespace bethedge {

namespace detail {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer: a bijective avalanche of the counter.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace detail

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream)
      : state_(detail::mix64(detail::mix64(seed) + detail::kGoldenGamma * stream)) {}

  std::uint64_t next_u64() {
    state_ += detail::kGoldenGamma;
    return detail::mix64(state_);
  }

  // Uniform draw in the open interval (0, 1): 53-bit mantissa offset by half
  // an ulp, so 0 and 1 are unreachable.
  double next_open01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

 private:
  std::uint64_t state_;
};

}  // namespace bethedge
