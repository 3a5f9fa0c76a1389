#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "cvqkd/bch.hpp"
#include "cvqkd/bitvec.hpp"
#include "cvqkd/ldpc.hpp"
#include "cvqkd/model_core.hpp"
#include "cvqkd/rate_table.hpp"

// Reverse reconciliation: Bob's discretized labels are the reference; Alice
// corrects her estimate of them from her own continuous values plus the
// per-plane payloads Bob transmits (LDPC syndromes for coded planes, the
// plane itself for disclosed ones), then runs the BCH residual cleanup.

namespace cvqkd {

struct BobReconciliation {
    std::vector<std::uint8_t> labels;          // Bob's 4-bit slot labels
    std::array<BitVec, kPlanes> planes;        // Gray bit planes, LSB first
    std::array<BitVec, kPlanes> payloads;      // syndrome or full plane per the plan
};

// Discretizes Bob's normalized values for the key pulses and produces the
// per-plane payloads; charges every payload bit to the ledger.
BobReconciliation bob_reconcile(const std::vector<double>& bob_values_snu,
                                const ReconciliationPlan& plan, LeakageLedger& ledger);

struct ReconciliationOutcome {
    std::vector<std::uint8_t> labels;     // Alice's recovered labels
    BitVec corrected_bits;                // plane-major concatenation, 4n bits
    bool success = false;                 // all syndromes satisfied
    std::array<std::uint32_t, kPlanes> iterations{};
    std::uint64_t bits_leaked = 0;        // payload bits (ledger delta, LDPC stage)
};

// Alice-side multistage decoding, least significant plane first, each plane
// conditioned on the planes already decoded. alice_values are her modulation
// values for the key pulses, on the axis Bob measured. A failed plane decode
// leaves success = false; the block still proceeds to the BCH stage and the
// final arbiter is key verification.
ReconciliationOutcome alice_reconcile(const std::vector<double>& alice_values,
                                      const ReconciliationPlan& plan,
                                      const std::array<BitVec, kPlanes>& payloads,
                                      LeakageLedger& ledger,
                                      std::uint32_t max_iterations = 200);

// Per-plane channel LLRs: log P(bit=0)/P(bit=1) for plane `plane`, given
// Alice's value and the bits of lower planes already decoded for that pulse.
std::vector<double> plane_llrs(const std::vector<double>& alice_values,
                               const ReconciliationPlan& plan, int plane,
                               const std::array<BitVec, kPlanes>& decoded_lower);

// BCH cleanup over the concatenated LDPC-coded planes (disclosed planes carry
// no errors). Bob sends the odd power-sum syndromes of every chunk.
struct BchStage {
    std::vector<std::uint32_t> chunk_lengths;
    std::vector<std::vector<std::uint32_t>> syndromes; // per chunk
    std::uint64_t bits_sent = 0;
};

// Extracts the coded-plane concatenation from plane bits.
BitVec coded_plane_bits(const ReconciliationPlan& plan, const std::array<BitVec, kPlanes>& planes);

BchStage bob_bch_syndromes(const BchCode& code, const BitVec& coded_bits, LeakageLedger& ledger);

struct BchCleanupResult {
    bool all_correctable = true;
    std::uint32_t chunks_failed = 0;
    std::uint64_t bits_flipped = 0;
};

// Corrects Alice's coded-plane bits in place against Bob's syndromes and
// mirrors the flips into the per-plane BitVecs.
BchCleanupResult alice_bch_cleanup(const BchCode& code, const ReconciliationPlan& plan,
                                   const BchStage& stage, std::array<BitVec, kPlanes>& planes,
                                   LeakageLedger& ledger);

// Operational reconciliation efficiency: (empirical label entropy minus
// leaked bits per pulse) / I_AB.
double measured_beta(const std::vector<std::uint8_t>& labels, std::uint64_t leaked_bits,
                     double i_ab);

// plane-major concatenation of the four planes
BitVec planes_to_bits(const std::array<BitVec, kPlanes>& planes);

} // namespace cvqkd
