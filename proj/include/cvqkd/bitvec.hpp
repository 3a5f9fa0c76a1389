#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace cvqkd {

// Packed bit string, LSB-first within each 64-bit word.
class BitVec {
  public:
    BitVec() = default;
    explicit BitVec(std::size_t n_bits) : n_(n_bits), w_((n_bits + 63) / 64, 0) {}

    std::size_t size() const { return n_; }
    bool empty() const { return n_ == 0; }

    bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v) {
        const std::uint64_t m = 1ull << (i & 63);
        if (v) w_[i >> 6] |= m;
        else w_[i >> 6] &= ~m;
    }
    void flip(std::size_t i) { w_[i >> 6] ^= 1ull << (i & 63); }

    void push_back(bool v) {
        if ((n_ & 63) == 0) w_.push_back(0);
        if (v) w_[n_ >> 6] |= 1ull << (n_ & 63);
        ++n_;
    }

    void append(const BitVec& other) {
        for (std::size_t i = 0; i < other.n_; ++i) push_back(other.get(i));
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (std::uint64_t w : w_) c += static_cast<std::size_t>(__builtin_popcountll(w));
        return c;
    }

    std::size_t hamming_distance(const BitVec& other) const {
        if (other.n_ != n_) throw std::invalid_argument("BitVec: length mismatch");
        std::size_t c = 0;
        for (std::size_t i = 0; i < w_.size(); ++i)
            c += static_cast<std::size_t>(__builtin_popcountll(w_[i] ^ other.w_[i]));
        return c;
    }

    bool operator==(const BitVec& other) const {
        return n_ == other.n_ && w_ == other.w_;
    }

    const std::vector<std::uint64_t>& words() const { return w_; }
    std::vector<std::uint64_t>& words() { return w_; }

    // trailing unused bits forced to zero (words()-level operations may dirty them)
    void mask_tail() {
        if (n_ & 63) w_.back() &= (~0ull) >> (64 - (n_ & 63));
    }

    std::vector<std::uint8_t> to_bytes() const {
        std::vector<std::uint8_t> out((n_ + 7) / 8, 0);
        for (std::size_t i = 0; i < out.size(); ++i) {
            const std::size_t word = i >> 3;
            out[i] = static_cast<std::uint8_t>(w_[word] >> ((i & 7) * 8));
        }
        return out;
    }

    static BitVec from_bytes(const std::uint8_t* data, std::size_t n_bits) {
        BitVec v(n_bits);
        const std::size_t n_bytes = (n_bits + 7) / 8;
        for (std::size_t i = 0; i < n_bytes; ++i)
            v.w_[i >> 3] |= std::uint64_t(data[i]) << ((i & 7) * 8);
        v.mask_tail();
        return v;
    }

  private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

} // namespace cvqkd
