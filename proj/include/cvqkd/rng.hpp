#pragma once

#include <array>
#include <cstdint>
#include <limits>

// Seedable random source. Protocol randomness (modulation, quadrature choice,
// disclosure sets, hash seeds) runs on a ChaCha20 keystream, standing in for
// the hardware quantum RNG of the optical system; the stream id separates
// independent uses of one seed. Bit-identical across platforms.

namespace cvqkd {

class ChaChaRng {
  public:
    using result_type = std::uint64_t;

    explicit ChaChaRng(std::uint64_t seed, std::uint64_t stream = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    std::uint64_t operator()() { return next_u64(); }
    std::uint64_t next_u64();
    std::uint32_t next_u32();

    // Uniform in [0,1) with 53 random bits.
    double uniform();
    // Uniform integer in [0, bound) without modulo bias.
    std::uint64_t below(std::uint64_t bound);
    bool coin() { return (next_u64() & 1u) != 0; }

    // Standard normal deviate (polar Box-Muller; caches the pair partner).
    double gaussian();

  private:
    void refill();

    std::array<std::uint32_t, 16> state_{};
    std::array<std::uint32_t, 16> block_{};
    int pos_ = 16; // word index into block_, 16 = exhausted
    double cached_gauss_ = 0.0;
    bool has_cached_gauss_ = false;
};

// Cheap stateless mixer for deriving per-block/per-purpose seeds from a base
// seed (splitmix64 finalizer).
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt);

} // namespace cvqkd
