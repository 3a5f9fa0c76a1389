#pragma once

#include <cstdint>
#include <vector>

// Shared domain types and unit conventions. All variances downstream of
// calibration are expressed in shot-noise units (vacuum quadrature variance
// equals 1); detector units appear only in raw simulator output and in the
// calibrate/normalize pair.

namespace cvqkd {

// Physical parameter set of one link, in shot-noise units.
struct LinkParams {
    double v_a = 10.0;            // Alice modulation variance V_A (V = V_A + 1)
    double t = 0.51;              // channel transmittance, (0, 1]
    double epsilon = 0.01;        // excess noise at channel input
    double eta = 0.6;             // Bob apparatus transmittance, (0, 1]
    double v_el = 0.01;           // electronic noise at Bob input
    double beta = 0.9;            // reconciliation efficiency, [0, 1]
    double pulse_rate_hz = 500e3; // optical repetition rate

    void validate() const; // throws std::invalid_argument on violation
};

// Detector calibration: shot-noise variance and electronic noise in raw
// detector units, plus Bob's factory-characterized transmittance.
struct Calibration {
    double n0 = 1.0;       // shot-noise variance, detector units
    double v_el_raw = 0.0; // electronic noise variance, detector units
    double eta = 1.0;

    double v_el() const { return v_el_raw / n0; } // shot-noise units
};

struct FiberModel {
    double loss_db_per_km = 0.2;
    double length_km = 15.0;

    double loss_db() const { return loss_db_per_km * length_km; }
};

// Running count of every bit disclosed on the classical channel for one
// block. Counts only grow; privacy amplification reads the totals.
struct LeakageLedger {
    std::uint64_t estimation_bits = 0;
    std::uint64_t reconciliation_bits = 0;
    std::uint64_t bch_bits = 0;
    std::uint64_t verification_bits = 0;
    std::uint64_t auth_bits = 0;

    std::uint64_t total() const {
        return estimation_bits + reconciliation_bits + bch_bits +
               verification_bits + auth_bits;
    }
};

// T = 10^(-loss_db/10). Rejects negative losses.
double transmittance_from_db(double loss_db);
// Inverse of the above, loss_db = -10*log10(t).
double db_from_transmittance(double t);

// n0 = lo_only_variance - dark_variance; throws if the frames are degenerate
// (dark frame at least as large as the LO frame).
Calibration calibrate(double lo_only_variance, double dark_variance, double eta);

// Divides every sample by sqrt(n0), converting detector units to shot-noise
// units (variances scale by 1/n0).
std::vector<double> normalize(const std::vector<double>& block_raw, const Calibration& cal);
void normalize_in_place(std::vector<double>& block, const Calibration& cal);

} // namespace cvqkd
