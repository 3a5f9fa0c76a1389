#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cvqkd/model_core.hpp"

// Statistical replacement for the optical train: Gaussian bi-quadrature
// modulation at Alice, lossy noisy channel, random-quadrature homodyne
// detection at Bob. No pulse shapes, no polarization, no interferometer.
// Eve exists only through (T, epsilon).

namespace cvqkd {

// One simulated block. Alice's values are in shot-noise units; Bob's homodyne
// outcomes are in detector units (variance n0 per vacuum unit). The quadrature
// Bob did not measure is never materialized on his side.
struct QuadratureBlock {
    std::vector<double> alice_x;       // X quadrature modulation, SNU
    std::vector<double> alice_p;       // P quadrature modulation, SNU
    std::vector<std::uint8_t> bob_choice; // 0: measured X, 1: measured P
    std::vector<double> bob_value;     // homodyne outcome, detector units
    std::size_t n_pulses = 0;
    double n0 = 1.0;                   // detector-unit scale used
    std::uint64_t seed = 0;

    static constexpr std::size_t kDefaultPulses = 2'000'000;
};

// Piecewise-linear excess-noise schedule over pulse index. Empty script means
// the LinkParams epsilon everywhere.
struct NoiseScript {
    struct Point {
        double pulse_index = 0.0;
        double epsilon = 0.0;
    };
    std::vector<Point> points; // strictly increasing pulse_index

    bool empty() const { return points.empty(); }
    // linear interpolation, clamped at the ends
    double epsilon_at(double pulse_index) const;
    void validate() const; // monotone indices, eps within [0, 0.1]
};

// Generates a full block: per pulse, bob_value = sqrt(eta*T)*q*sqrt(n0) + g
// where q is the quadrature Bob chose and Var(g) = n0*(1 + eta*T*eps + v_el).
// Identical (params, script, n_pulses, n0, seed) give bit-identical blocks.
QuadratureBlock generate_block(const LinkParams& params, const NoiseScript& script,
                               std::size_t n_pulses, double n0, std::uint64_t seed);

struct CalibrationFrames {
    double lo_only_variance = 0.0; // LO present, no signal: n0*(1 + v_el)
    double dark_variance = 0.0;    // neither signal nor LO: n0*v_el
    std::size_t n_samples = 0;
};

// Empirical variances of the two calibration frames, >= 1e5 samples each.
CalibrationFrames calibration_frames(const LinkParams& params, double n0,
                                     std::size_t n_samples, std::uint64_t seed);

// Slow drift and fast jitter of the interferometric phase, mapped to an
// effective excess-noise schedule: residual phase variance phi2 per
// evaluation block contributes eps = v_a * phi2.
struct PhaseDriftModel {
    double drift_rad_per_s = 0.0;   // slow thermal drift rate
    double block_ms = 100.0;        // phase-evaluation block length
    bool ramp_compensated = true;   // linear counter-ramp applied per block
    double jitter_amplitude_rad = 0.0; // fast (50-1000 Hz) vibration term
    double horizon_s = 1.0;         // schedule length to emit
    double pulse_rate_hz = 500e3;
};

NoiseScript drift_script_from_phase_model(const PhaseDriftModel& model, double v_a);

// Block dump: little-endian 64-bit floats with a small header carrying
// n_pulses, seed and a params hash; used by test fixtures.
void dump_block(const QuadratureBlock& block, const LinkParams& params, const std::string& path);
QuadratureBlock load_block(const std::string& path);

} // namespace cvqkd
