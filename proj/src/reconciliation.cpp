#include "cvqkd/reconciliation.hpp"

#include <cmath>
#include <stdexcept>

#include "cvqkd/rng.hpp"

namespace cvqkd {

BobReconciliation bob_reconcile(const std::vector<double>& bob_values_snu,
                                const ReconciliationPlan& plan, LeakageLedger& ledger) {
    if (bob_values_snu.size() != plan.n_code)
        throw std::invalid_argument("bob_reconcile: value count does not match the plan");

    BobReconciliation out;
    out.labels = discretize(bob_values_snu, plan.boundaries);
    out.planes = split_planes(out.labels);

    for (int l = 0; l < kPlanes; ++l) {
        const auto& pp = plan.planes[static_cast<std::size_t>(l)];
        if (pp.disclose) {
            out.payloads[static_cast<std::size_t>(l)] = out.planes[static_cast<std::size_t>(l)];
        } else {
            const LdpcCode code = build_ldpc(plan.n_code, pp.syndrome_bits, plan.code_seed,
                                             static_cast<std::uint32_t>(l));
            out.payloads[static_cast<std::size_t>(l)] =
                ldpc_syndrome(code, out.planes[static_cast<std::size_t>(l)]);
        }
        ledger.reconciliation_bits += out.payloads[static_cast<std::size_t>(l)].size();
    }
    return out;
}

std::vector<double> plane_llrs(const std::vector<double>& alice_values,
                               const ReconciliationPlan& plan, int plane,
                               const std::array<BitVec, kPlanes>& decoded_lower) {
    const std::size_t n = alice_values.size();
    std::vector<double> llr(n);
    const std::uint8_t low_mask = static_cast<std::uint8_t>((1u << plane) - 1u);
    constexpr double kClamp = 28.0;

    for (std::size_t i = 0; i < n; ++i) {
        std::uint8_t low = 0;
        for (int l = 0; l < plane; ++l)
            if (decoded_lower[static_cast<std::size_t>(l)].get(i)) low |= std::uint8_t(1u << l);

        const double mu = plan.mu_gain * alice_values[i];
        const auto p = slot_probabilities(plan.boundaries, mu, plan.cond_sigma);
        double p0 = 0.0, p1 = 0.0;
        for (int s = 0; s < kSlots; ++s) {
            const std::uint8_t g = gray_encode(static_cast<std::uint8_t>(s));
            if ((g & low_mask) != low) continue;
            if ((g >> plane) & 1u)
                p1 += p[static_cast<std::size_t>(s)];
            else
                p0 += p[static_cast<std::size_t>(s)];
        }
        double v;
        if (p0 <= 0.0 && p1 <= 0.0) v = 0.0; // decoded lower bits inconsistent with anything
        else if (p1 <= 0.0) v = kClamp;
        else if (p0 <= 0.0) v = -kClamp;
        else {
            v = std::log(p0 / p1);
            if (v > kClamp) v = kClamp;
            if (v < -kClamp) v = -kClamp;
        }
        llr[i] = v;
    }
    return llr;
}

ReconciliationOutcome alice_reconcile(const std::vector<double>& alice_values,
                                      const ReconciliationPlan& plan,
                                      const std::array<BitVec, kPlanes>& payloads,
                                      LeakageLedger& ledger,
                                      std::uint32_t max_iterations) {
    if (alice_values.size() != plan.n_code)
        throw std::invalid_argument("alice_reconcile: value count does not match the plan");

    ReconciliationOutcome out;
    out.success = true;
    std::array<BitVec, kPlanes> decoded;

    for (int l = 0; l < kPlanes; ++l) {
        const auto& pp = plan.planes[static_cast<std::size_t>(l)];
        const BitVec& payload = payloads[static_cast<std::size_t>(l)];
        if (pp.disclose) {
            if (payload.size() != plan.n_code)
                throw std::invalid_argument("alice_reconcile: disclosed plane size mismatch");
            decoded[static_cast<std::size_t>(l)] = payload;
        } else {
            if (payload.size() != pp.syndrome_bits)
                throw std::invalid_argument("alice_reconcile: syndrome size mismatch");
            const LdpcCode code = build_ldpc(plan.n_code, pp.syndrome_bits, plan.code_seed,
                                             static_cast<std::uint32_t>(l));
            const auto llr = plane_llrs(alice_values, plan, l, decoded);
            auto res = ldpc_decode_syndrome(code, llr, payload, max_iterations);
            out.iterations[static_cast<std::size_t>(l)] = res.iterations;
            if (!res.syndrome_match) out.success = false;
            decoded[static_cast<std::size_t>(l)] = std::move(res.bits);
        }
        out.bits_leaked += payload.size();
    }
    ledger.reconciliation_bits += out.bits_leaked;

    out.labels = merge_planes(decoded);
    out.corrected_bits = planes_to_bits(decoded);
    return out;
}

BitVec coded_plane_bits(const ReconciliationPlan& plan,
                        const std::array<BitVec, kPlanes>& planes) {
    BitVec out;
    for (int l = 0; l < kPlanes; ++l)
        if (!plan.planes[static_cast<std::size_t>(l)].disclose)
            out.append(planes[static_cast<std::size_t>(l)]);
    return out;
}

BchStage bob_bch_syndromes(const BchCode& code, const BitVec& coded_bits,
                           LeakageLedger& ledger) {
    BchStage stage;
    const std::size_t n = coded_bits.size();
    const std::size_t chunk = code.n();
    for (std::size_t off = 0; off < n; off += chunk) {
        const std::size_t len = std::min(chunk, n - off);
        stage.chunk_lengths.push_back(static_cast<std::uint32_t>(len));
        stage.syndromes.push_back(code.syndromes(coded_bits, off, len));
        stage.bits_sent += code.syndrome_bits();
    }
    ledger.bch_bits += stage.bits_sent;
    return stage;
}

BchCleanupResult alice_bch_cleanup(const BchCode& code, const ReconciliationPlan& plan,
                                   const BchStage& stage, std::array<BitVec, kPlanes>& planes,
                                   LeakageLedger& ledger) {
    BitVec mine = coded_plane_bits(plan, planes);

    // map concatenated coded-bit index back to (plane, pulse)
    std::vector<int> coded_planes;
    for (int l = 0; l < kPlanes; ++l)
        if (!plan.planes[static_cast<std::size_t>(l)].disclose) coded_planes.push_back(l);

    BchCleanupResult result;
    std::size_t off = 0;
    for (std::size_t c = 0; c < stage.syndromes.size(); ++c) {
        const std::size_t len = stage.chunk_lengths[c];
        if (off + len > mine.size())
            throw std::invalid_argument("alice_bch_cleanup: chunk layout mismatch");
        const auto my_syn = code.syndromes(mine, off, len);
        const auto outcome = code.decode_difference(my_syn, stage.syndromes[c], len);
        if (!outcome.correctable) {
            result.all_correctable = false;
            ++result.chunks_failed;
        } else {
            for (const std::uint32_t p : outcome.error_positions) {
                const std::size_t global = off + p;
                mine.flip(global);
                const std::size_t which = global / plan.n_code;
                const std::size_t pulse = global % plan.n_code;
                planes[static_cast<std::size_t>(coded_planes[which])].flip(pulse);
                ++result.bits_flipped;
            }
        }
        off += len;
    }
    ledger.bch_bits += stage.bits_sent; // Alice's ledger mirrors the received bits
    return result;
}

double measured_beta(const std::vector<std::uint8_t>& labels, std::uint64_t leaked_bits,
                     double i_ab) {
    if (labels.empty()) throw std::invalid_argument("measured_beta: empty labels");
    if (!(i_ab > 0.0)) throw std::invalid_argument("measured_beta: nonpositive I_AB");
    std::array<double, kSlots> hist{};
    for (auto l : labels) hist[l] += 1.0;
    const double n = static_cast<double>(labels.size());
    double h = 0.0;
    for (double c : hist) {
        if (c > 0.0) {
            const double p = c / n;
            h -= p * std::log2(p);
        }
    }
    const double leak_per_pulse = static_cast<double>(leaked_bits) / n;
    return (h - leak_per_pulse) / i_ab;
}

BitVec planes_to_bits(const std::array<BitVec, kPlanes>& planes) {
    BitVec out;
    for (const auto& p : planes) out.append(p);
    return out;
}

} // namespace cvqkd
