#include "cvqkd/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cvqkd {

void SlotBoundaries::validate() const {
    for (std::size_t i = 1; i < cuts.size(); ++i)
        if (!(cuts[i] > cuts[i - 1]))
            throw std::invalid_argument("SlotBoundaries: cuts not strictly increasing");
}

SlotBoundaries SlotBoundaries::scaled(double factor) const {
    if (!(factor > 0.0)) throw std::invalid_argument("SlotBoundaries: nonpositive scale");
    SlotBoundaries s;
    for (std::size_t i = 0; i < cuts.size(); ++i) s.cuts[i] = cuts[i] * factor;
    return s;
}

SlotBoundaries build_boundaries(double variance) {
    if (!(variance > 0.0)) throw std::invalid_argument("build_boundaries: nonpositive variance");
    SlotBoundaries b;
    const double sigma = std::sqrt(variance);
    for (int k = 1; k < kSlots; ++k)
        b.cuts[k - 1] = sigma * normal_quantile(static_cast<double>(k) / kSlots);
    b.cuts[kSlots / 2 - 1] = 0.0; // median cut exactly at zero
    return b;
}

std::vector<std::uint8_t> discretize(const std::vector<double>& values,
                                     const SlotBoundaries& boundaries) {
    boundaries.validate();
    std::vector<std::uint8_t> labels(values.size());
    const auto begin = boundaries.cuts.begin();
    const auto end = boundaries.cuts.end();
    for (std::size_t i = 0; i < values.size(); ++i) {
        // half-open [lo, hi): a value equal to a cut belongs to the upper slot
        labels[i] = static_cast<std::uint8_t>(std::upper_bound(begin, end, values[i]) - begin);
    }
    return labels;
}

std::array<BitVec, kPlanes> split_planes(const std::vector<std::uint8_t>& labels) {
    std::array<BitVec, kPlanes> planes;
    for (auto& p : planes) p = BitVec(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const std::uint8_t g = gray_encode(labels[i]);
        for (int l = 0; l < kPlanes; ++l)
            if ((g >> l) & 1u) planes[static_cast<std::size_t>(l)].set(i, true);
    }
    return planes;
}

std::vector<std::uint8_t> merge_planes(const std::array<BitVec, kPlanes>& planes) {
    const std::size_t n = planes[0].size();
    for (const auto& p : planes)
        if (p.size() != n) throw std::invalid_argument("merge_planes: plane length mismatch");
    std::vector<std::uint8_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint8_t g = 0;
        for (int l = 0; l < kPlanes; ++l)
            if (planes[static_cast<std::size_t>(l)].get(i)) g |= std::uint8_t(1u << l);
        labels[i] = gray_decode(g);
    }
    return labels;
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p outside (0,1)");

    // Acklam's rational approximation
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // one Halley step against the exact CDF
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
    x = x - u / (1.0 + x * u / 2.0);
    return x;
}

} // namespace cvqkd
