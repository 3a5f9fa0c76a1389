#include "cvqkd/bch.hpp"

#include <stdexcept>

namespace cvqkd {

namespace {
// primitive polynomials, x^m + ... + 1, bit i = coefficient of x^i
std::uint32_t default_primitive(int m) {
    switch (m) {
        case 4: return 0x13;    // x^4 + x + 1
        case 5: return 0x25;    // x^5 + x^2 + 1
        case 6: return 0x43;    // x^6 + x + 1
        case 15: return 0x8003; // x^15 + x + 1
        default: throw std::invalid_argument("BchCode: no primitive polynomial for this m");
    }
}
} // namespace

GaloisField::GaloisField(int m, std::uint32_t primitive_poly) : m_(m) {
    if (m < 2 || m > 20) throw std::invalid_argument("GaloisField: m out of range");
    size_ = 1u << m;
    exp_.resize(size_ - 1);
    log_.assign(size_, 0);
    std::uint32_t x = 1;
    for (std::uint32_t i = 0; i < size_ - 1; ++i) {
        exp_[i] = x;
        log_[x] = i;
        x <<= 1;
        if (x & size_) x ^= primitive_poly;
    }
    if (x != 1) throw std::invalid_argument("GaloisField: polynomial is not primitive");
}

std::uint32_t GaloisField::inv(std::uint32_t a) const {
    if (a == 0) throw std::domain_error("GaloisField: inverse of zero");
    return exp_[(order() - log_[a]) % order()];
}

std::uint32_t GaloisField::log(std::uint32_t a) const {
    if (a == 0) throw std::domain_error("GaloisField: log of zero");
    return log_[a];
}

BchCode::BchCode(int m, int t) : field_(m, default_primitive(m)), t_(t) {
    if (t < 1 || 2 * t >= static_cast<int>(field_.order()))
        throw std::invalid_argument("BchCode: t out of range");
}

std::vector<std::uint32_t> BchCode::syndromes(const BitVec& chunk, std::size_t offset,
                                              std::size_t len) const {
    if (len > n()) throw std::invalid_argument("BchCode: chunk longer than code length");
    // S_j = sum over set bit positions p of alpha^(j*p), odd j only
    std::vector<std::uint32_t> syn(static_cast<std::size_t>(t_), 0);
    const std::uint32_t ord = field_.order();
    for (std::size_t p = 0; p < len; ++p) {
        if (!chunk.get(offset + p)) continue;
        for (int k = 0; k < t_; ++k) {
            const std::uint32_t j = static_cast<std::uint32_t>(2 * k + 1);
            syn[static_cast<std::size_t>(k)] ^=
                field_.pow_alpha(static_cast<std::uint32_t>((static_cast<std::uint64_t>(j) * p) % ord));
        }
    }
    return syn;
}

BchCode::DecodeOutcome BchCode::decode_difference(const std::vector<std::uint32_t>& syn_a,
                                                  const std::vector<std::uint32_t>& syn_b,
                                                  std::size_t chunk_len) const {
    if (syn_a.size() != static_cast<std::size_t>(t_) || syn_b.size() != static_cast<std::size_t>(t_))
        throw std::invalid_argument("BchCode: syndrome size mismatch");

    // full syndrome sequence S_1 .. S_2t, even entries via Frobenius
    std::vector<std::uint32_t> s(static_cast<std::size_t>(2 * t_) + 1, 0); // 1-indexed
    for (int k = 0; k < t_; ++k) s[static_cast<std::size_t>(2 * k + 1)] = syn_a[static_cast<std::size_t>(k)] ^ syn_b[static_cast<std::size_t>(k)];
    for (int j = 2; j <= 2 * t_; j += 2) {
        const std::uint32_t h = s[static_cast<std::size_t>(j / 2)];
        s[static_cast<std::size_t>(j)] = field_.mul(h, h);
    }

    bool all_zero = true;
    for (int j = 1; j <= 2 * t_; ++j)
        if (s[static_cast<std::size_t>(j)] != 0) { all_zero = false; break; }
    DecodeOutcome out;
    if (all_zero) {
        out.correctable = true;
        return out;
    }

    // Berlekamp-Massey for the error locator sigma(x)
    std::vector<std::uint32_t> sigma{1}, prev{1};
    std::uint32_t prev_discrepancy = 1;
    int L = 0, shift = 1;
    for (int j = 1; j <= 2 * t_; ++j) {
        std::uint32_t d = s[static_cast<std::size_t>(j)];
        for (int i = 1; i <= L && i < static_cast<int>(sigma.size()); ++i)
            d ^= field_.mul(sigma[static_cast<std::size_t>(i)], s[static_cast<std::size_t>(j - i)]);
        if (d == 0) {
            ++shift;
            continue;
        }
        // sigma' = sigma - (d/prev_d) x^shift prev
        std::vector<std::uint32_t> next = sigma;
        const std::uint32_t coef = field_.mul(d, field_.inv(prev_discrepancy));
        if (next.size() < prev.size() + static_cast<std::size_t>(shift))
            next.resize(prev.size() + static_cast<std::size_t>(shift), 0);
        for (std::size_t i = 0; i < prev.size(); ++i)
            next[i + static_cast<std::size_t>(shift)] ^= field_.mul(coef, prev[i]);
        if (2 * L <= j - 1) {
            prev = sigma;
            prev_discrepancy = d;
            L = j - L;
            shift = 1;
        } else {
            ++shift;
        }
        sigma = std::move(next);
    }

    while (!sigma.empty() && sigma.back() == 0) sigma.pop_back();
    const int deg = static_cast<int>(sigma.size()) - 1;
    if (deg <= 0 || deg > t_ || L != deg) {
        out.correctable = false;
        return out;
    }

    // Chien search: position p is in error iff sigma(alpha^-p) = 0
    const std::uint32_t ord = field_.order();
    for (std::uint32_t p = 0; p < ord && out.error_positions.size() <= static_cast<std::size_t>(deg); ++p) {
        std::uint32_t acc = 0;
        const std::uint32_t xlog = (ord - p) % ord; // alpha^-p
        for (std::size_t i = 0; i < sigma.size(); ++i) {
            if (sigma[i] == 0) continue;
            const std::uint32_t e = static_cast<std::uint32_t>(
                (field_.log(sigma[i]) + static_cast<std::uint64_t>(xlog) * i) % ord);
            acc ^= field_.pow_alpha(e);
        }
        if (acc == 0) out.error_positions.push_back(p);
    }

    if (static_cast<int>(out.error_positions.size()) != deg) {
        out.error_positions.clear();
        out.correctable = false;
        return out;
    }
    for (std::uint32_t p : out.error_positions) {
        if (p >= chunk_len) { // error in the zero-padded tail: impossible pattern
            out.error_positions.clear();
            out.correctable = false;
            return out;
        }
    }
    out.correctable = true;
    return out;
}

} // namespace cvqkd
