#pragma once

#include <cstdint>
#include <vector>

#include "cvqkd/bitvec.hpp"

// Binary BCH syndrome decoding for residual-error cleanup after the LDPC
// stage. Bob transmits the odd power-sum syndromes S_1, S_3, ..., S_{2t-1}
// of each chunk (even ones follow from squaring); Alice decodes the
// difference pattern with Berlekamp-Massey and a Chien search and flips up
// to t positions per chunk.

namespace cvqkd {

// GF(2^m) with log/antilog tables over a primitive polynomial.
class GaloisField {
  public:
    GaloisField(int m, std::uint32_t primitive_poly);

    int m() const { return m_; }
    std::uint32_t size() const { return size_; }          // 2^m
    std::uint32_t order() const { return size_ - 1; }     // multiplicative order

    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[(log_[a] + log_[b]) % order()];
    }
    std::uint32_t inv(std::uint32_t a) const;
    std::uint32_t pow_alpha(std::uint32_t e) const { return exp_[e % order()]; }
    std::uint32_t log(std::uint32_t a) const;

  private:
    int m_;
    std::uint32_t size_;
    std::vector<std::uint32_t> exp_;
    std::vector<std::uint32_t> log_;
};

class BchCode {
  public:
    // Code over GF(2^m), length 2^m - 1, correcting up to t errors.
    // Default is the production code: m = 15, t = 30.
    BchCode(int m = 15, int t = 30);

    int t() const { return t_; }
    std::uint32_t n() const { return field_.order(); }
    // transmitted syndrome size: t field elements of m bits each
    std::uint32_t syndrome_bits() const { return static_cast<std::uint32_t>(t_) * field_.m(); }

    // Odd power-sum syndromes S_1, S_3, ..., S_{2t-1} of a chunk of up to n
    // bits (shorter chunks are implicitly zero padded).
    std::vector<std::uint32_t> syndromes(const BitVec& chunk, std::size_t offset,
                                         std::size_t len) const;

    struct DecodeOutcome {
        bool correctable = false;
        std::vector<std::uint32_t> error_positions; // within the chunk
    };

    // Decodes the error pattern whose odd syndromes are syn_a XOR syn_b
    // (componentwise over GF(2^m)); positions beyond chunk_len mark the
    // pattern uncorrectable.
    DecodeOutcome decode_difference(const std::vector<std::uint32_t>& syn_a,
                                    const std::vector<std::uint32_t>& syn_b,
                                    std::size_t chunk_len) const;

    const GaloisField& field() const { return field_; }

  private:
    GaloisField field_;
    int t_;
};

} // namespace cvqkd
