#include "cvqkd/rng.hpp"

#include <cmath>

namespace cvqkd {

namespace {

inline std::uint32_t rotl(std::uint32_t x, int n) {
    return (x << n) | (x >> (32 - n));
}

inline void quarter_round(std::uint32_t& a, std::uint32_t& b, std::uint32_t& c, std::uint32_t& d) {
    a += b; d ^= a; d = rotl(d, 16);
    c += d; b ^= c; b = rotl(b, 12);
    a += b; d ^= a; d = rotl(d, 8);
    c += d; b ^= c; b = rotl(b, 7);
}

} // namespace

ChaChaRng::ChaChaRng(std::uint64_t seed, std::uint64_t stream) {
    // "expand 32-byte k" constants
    state_[0] = 0x61707865u;
    state_[1] = 0x3320646eu;
    state_[2] = 0x79622d32u;
    state_[3] = 0x6b206574u;
    // 256-bit key from the two 64-bit inputs, whitened so that nearby seeds
    // give unrelated keys
    std::uint64_t k0 = mix_seed(seed, 0x243f6a8885a308d3ull);
    std::uint64_t k1 = mix_seed(seed, 0x13198a2e03707344ull);
    std::uint64_t k2 = mix_seed(stream, 0xa4093822299f31d0ull);
    std::uint64_t k3 = mix_seed(seed ^ stream, 0x082efa98ec4e6c89ull);
    state_[4] = static_cast<std::uint32_t>(k0);
    state_[5] = static_cast<std::uint32_t>(k0 >> 32);
    state_[6] = static_cast<std::uint32_t>(k1);
    state_[7] = static_cast<std::uint32_t>(k1 >> 32);
    state_[8] = static_cast<std::uint32_t>(k2);
    state_[9] = static_cast<std::uint32_t>(k2 >> 32);
    state_[10] = static_cast<std::uint32_t>(k3);
    state_[11] = static_cast<std::uint32_t>(k3 >> 32);
    // counter
    state_[12] = 0;
    state_[13] = 0;
    // nonce
    state_[14] = static_cast<std::uint32_t>(stream);
    state_[15] = static_cast<std::uint32_t>(stream >> 32);
}

void ChaChaRng::refill() {
    block_ = state_;
    for (int round = 0; round < 10; ++round) { // 20 rounds, 2 per loop
        quarter_round(block_[0], block_[4], block_[8], block_[12]);
        quarter_round(block_[1], block_[5], block_[9], block_[13]);
        quarter_round(block_[2], block_[6], block_[10], block_[14]);
        quarter_round(block_[3], block_[7], block_[11], block_[15]);
        quarter_round(block_[0], block_[5], block_[10], block_[15]);
        quarter_round(block_[1], block_[6], block_[11], block_[12]);
        quarter_round(block_[2], block_[7], block_[8], block_[13]);
        quarter_round(block_[3], block_[4], block_[9], block_[14]);
    }
    for (int i = 0; i < 16; ++i) block_[i] += state_[i];
    if (++state_[12] == 0) ++state_[13];
    pos_ = 0;
}

std::uint32_t ChaChaRng::next_u32() {
    if (pos_ >= 16) refill();
    return block_[pos_++];
}

std::uint64_t ChaChaRng::next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return lo | (hi << 32);
}

double ChaChaRng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t ChaChaRng::below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % bound;
}

double ChaChaRng::gaussian() {
    if (has_cached_gauss_) {
        has_cached_gauss_ = false;
        return cached_gauss_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    cached_gauss_ = v * m;
    has_cached_gauss_ = true;
    return u * m;
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ull + salt * 0xff51afd7ed558ccdull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace cvqkd
