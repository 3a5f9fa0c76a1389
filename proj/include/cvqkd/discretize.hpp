#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cvqkd/bitvec.hpp"

// 16-slot discretization of continuous quadrature values and the Gray-coded
// bit-plane decomposition used by the multilevel reconciliation.

namespace cvqkd {

inline constexpr int kSlots = 16;
inline constexpr int kPlanes = 4;

// 15 strictly increasing finite cut points; slot k is [cuts[k-1], cuts[k]),
// half open, with slot 0 = (-inf, cuts[0]) and slot 15 = [cuts[14], +inf).
struct SlotBoundaries {
    std::array<double, kSlots - 1> cuts{};

    void validate() const; // throws on non-monotone cuts
    SlotBoundaries scaled(double factor) const;
};

// Equiprobable quantiles of the zero-mean Gaussian with the given variance.
SlotBoundaries build_boundaries(double variance);

// Per-value slot index in [0, 15].
std::vector<std::uint8_t> discretize(const std::vector<double>& values,
                                     const SlotBoundaries& boundaries);

inline std::uint8_t gray_encode(std::uint8_t label) {
    return static_cast<std::uint8_t>(label ^ (label >> 1));
}
inline std::uint8_t gray_decode(std::uint8_t g) {
    g ^= g >> 2;
    g ^= g >> 1;
    return static_cast<std::uint8_t>(g & 0xf);
}
inline bool plane_bit(std::uint8_t label, int plane) {
    return (gray_encode(label) >> plane) & 1u;
}

// One packed bit string per plane, least significant Gray plane first.
std::array<BitVec, kPlanes> split_planes(const std::vector<std::uint8_t>& labels);
// Inverse of split_planes.
std::vector<std::uint8_t> merge_planes(const std::array<BitVec, kPlanes>& planes);

// Standard normal CDF and its inverse (Acklam rational approximation with one
// Halley refinement; |error| < 1e-13 over the open unit interval).
double normal_cdf(double x);
double normal_quantile(double p);

} // namespace cvqkd
