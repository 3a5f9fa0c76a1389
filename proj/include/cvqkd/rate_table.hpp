#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cvqkd/discretize.hpp"
#include "cvqkd/estimation.hpp"
#include "cvqkd/model_core.hpp"

// Rate selection for the multilevel reconciliation. Slot boundaries and
// per-plane code rates come from a precomputed table indexed by the estimated
// SNR; both endpoints derive the identical plan from the shared estimates.
//
// The boundary shapes are not the equiprobable quantiles: they are tuned per
// SNR to maximize the net reconciled information after realistic code
// overheads (equiprobable slots waste too much on the disclosed fine planes
// to reach the target efficiency). The shapes are stored in units of Bob's
// standard deviation and scaled by sqrt(v_b_hat) at run time.

namespace cvqkd {

inline constexpr std::uint32_t kRateTableVersion = 1;

struct PlaneEntropies {
    // H(plane_l | lower planes), labels only
    std::array<double, kPlanes> unconditional{};
    // H(plane_l | A, lower planes) for the Gaussian slot channel
    std::array<double, kPlanes> conditional{};
};

// Entropies of the Gray bit planes for correlation rho, with boundaries given
// in units of Bob's marginal standard deviation. Gauss-Legendre panels over
// the conditioning variable; accuracy ~1e-10.
PlaneEntropies plane_entropies(const SlotBoundaries& unit_cuts, double rho);

// Slot probabilities of Bob's value given the conditional mean mu (both in
// units where Bob's marginal variance is sigma_b^2 = mu-scale consistent).
std::array<double, kSlots> slot_probabilities(const SlotBoundaries& cuts, double mu,
                                              double sigma);

struct PlanePlan {
    bool disclose = false;
    std::uint32_t syndrome_bits = 0; // 0 when disclosed
    double cond_entropy = 0.0;
    double uncond_entropy = 0.0;
};

struct ReconciliationPlan {
    std::uint32_t n_code = 0;
    double snr = 0.0;
    double rho = 0.0;
    SlotBoundaries unit_cuts;   // units of sigma_B
    SlotBoundaries boundaries;  // shot-noise units, scaled by sqrt(v_b_hat)
    double mu_gain = 0.0;       // sqrt(eta * t_hat): Alice value -> Bob mean (SNU)
    double cond_sigma = 0.0;    // conditional noise sigma (SNU)
    std::array<PlanePlan, kPlanes> planes{};
    std::uint64_t code_seed = 0;
    std::uint32_t table_version = kRateTableVersion;

    std::uint64_t leakage_bits() const {
        std::uint64_t total = 0;
        for (const auto& p : planes)
            total += p.disclose ? n_code : p.syndrome_bits;
        return total;
    }
};

// Syndrome overhead factor applied to the conditional entropy when sizing a
// plane's code, as a function of the resulting code rate and block length.
// Calibrated against the shipped decoder (see tests/calibrate_rates).
double code_overhead(double rate, std::uint32_t n_code);

// Interpolated boundary shape for the estimated SNR.
SlotBoundaries table_boundaries(double snr);

ReconciliationPlan plan_reconciliation(const EstimationResult& est, const Calibration& cal,
                                       std::uint32_t n_code, std::uint64_t code_seed);

} // namespace cvqkd
