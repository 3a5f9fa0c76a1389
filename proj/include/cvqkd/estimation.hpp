#pragma once

#include <cstdint>
#include <vector>

#include "cvqkd/channel_sim.hpp"
#include "cvqkd/model_core.hpp"
#include "cvqkd/security_bound.hpp"

// Channel evaluation: Alice discloses a random fraction of her modulation
// values (both quadratures, 16-bit quantized); Bob pairs them with his own
// measurements and produces point estimates with asymptotic standard errors.

namespace cvqkd {

struct EstimationResult {
    double v_a_hat = 0.0;
    double t_hat = 0.0;
    double epsilon_hat = 0.0; // raw, may be slightly negative
    double rho_squared = 0.0;
    double v_b_hat = 0.0; // Bob variance in shot-noise units
    std::uint64_t n_disclosed = 0;

    // one-sigma standard errors
    double se_v_a = 0.0;
    double se_t = 0.0;
    double se_epsilon = 0.0;
    double se_rho_squared = 0.0;

    bool epsilon_suspicious() const { return epsilon_hat < -3.0 * se_epsilon; }
};

// 16-bit uniform quantizer over +-5*sqrt(v_a_nominal), clamped. Values are
// quantized after normalization, so the wire carries shot-noise units.
struct Quantizer16 {
    double lo = 0.0;
    double step = 0.0;

    static Quantizer16 for_modulation(double v_a_nominal);
    std::uint16_t encode(double x) const;
    double decode(std::uint16_t code) const;
};

struct Disclosure {
    std::vector<std::uint32_t> disclosed_indices; // sorted
    std::vector<std::uint32_t> key_indices;       // sorted complement
    // quantizer-reconstructed Alice values for the disclosed pulses, in
    // disclosed_indices order
    std::vector<double> alice_x;
    std::vector<double> alice_p;
    Quantizer16 quantizer;
};

// Selects floor(fraction * n) pulse indices with the shared seed, quantizes
// both Alice components and charges 32 bits per disclosed pulse to the
// ledger. Disclosed indices never enter key material.
Disclosure disclose(const QuadratureBlock& block, double fraction, double v_a_nominal,
                    std::uint64_t seed, LeakageLedger& ledger);

// Bob-side estimation over the disclosed subset. bob_value is in detector
// units and is normalized internally via cal. For each pulse the Alice
// component matching Bob's quadrature choice is used, so every disclosed
// pulse yields one usable pair. Throws if fewer than min_pairs pairs or if
// the data does not identify T (t_hat <= 0 or no modulation).
EstimationResult estimate(const std::vector<double>& alice_x,
                          const std::vector<double>& alice_p,
                          const std::vector<std::uint8_t>& bob_choice,
                          const std::vector<double>& bob_value,
                          const Calibration& cal,
                          std::size_t min_pairs = 10'000);

struct AgreedSecurity {
    LinkParams params;      // parameters fed to the bound (epsilon clamped at 0)
    SecurityQuantities sq;
    bool abort = false;     // delta_i <= 0: no key extractable
};

// Builds LinkParams from the estimates plus calibration and evaluates the
// bound. Both parties call this on identical inputs and obtain bit-identical
// results. t_hat overshooting 1 from noise is clamped to 1.
AgreedSecurity agree_security(const EstimationResult& est, const Calibration& cal,
                              double beta, double pulse_rate_hz);

} // namespace cvqkd
