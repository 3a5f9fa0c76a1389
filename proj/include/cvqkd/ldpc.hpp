#pragma once

#include <cstdint>
#include <vector>

#include "cvqkd/bitvec.hpp"

// Pseudo-random irregular LDPC codes for syndrome-based slice reconciliation,
// reproducible from (n, m, seed) so that both endpoints build identical
// graphs from a shared seed instead of shipping matrices.

namespace cvqkd {

struct LdpcCode {
    std::uint32_t n = 0; // variable nodes (block length)
    std::uint32_t m = 0; // check nodes (syndrome length)
    std::uint64_t seed = 0;
    std::uint32_t level = 0; // bit plane this code serves

    // edge list grouped by check: check j owns edges [chk_ptr[j], chk_ptr[j+1])
    std::vector<std::uint32_t> chk_ptr;
    std::vector<std::uint32_t> chk_var; // variable index per edge
    // edges grouped by variable: positions into chk_var
    std::vector<std::uint32_t> var_ptr;
    std::vector<std::uint32_t> var_edge;

    double rate() const { return 1.0 - static_cast<double>(m) / static_cast<double>(n); }
    std::size_t edges() const { return chk_var.size(); }
};

// Builds an irregular code with the variable-degree profile of the classic
// rate-1/2 ensemble (edge fractions 0.30013/0.28395/0.41592 on degrees
// 2/3/8, Richardson & Urbanke), check degrees concentrated. Double edges are
// excluded and short cycles suppressed with bounded retries.
LdpcCode build_ldpc(std::uint32_t n, std::uint32_t m, std::uint64_t seed, std::uint32_t level = 0);

// s_j = XOR of bits on check j.
BitVec ldpc_syndrome(const LdpcCode& code, const BitVec& bits);

struct LdpcDecodeResult {
    BitVec bits;              // hard decisions
    bool syndrome_match = false;
    std::uint32_t iterations = 0;
};

// Log-domain sum-product decoding toward a target syndrome. llr[i] is
// log(P(bit=0)/P(bit=1)) for variable i; early exit on syndrome match.
LdpcDecodeResult ldpc_decode_syndrome(const LdpcCode& code, const std::vector<double>& llr,
                                      const BitVec& target_syndrome,
                                      std::uint32_t max_iterations = 200);

} // namespace cvqkd
