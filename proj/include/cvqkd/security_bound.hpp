#pragma once

#include <vector>

#include "cvqkd/model_core.hpp"

// Closed-form secret-information calculus for the coherent-state protocol
// with reverse reconciliation, under the realistic assumption that the
// eavesdropper holds the channel but not Bob's apparatus. Everything here is
// a pure function of LinkParams.

namespace cvqkd {

// All intermediates of one bound evaluation.
//
//   V        = V_A + 1
//   chi_line = 1/T - 1 + eps            (channel-added noise, input-referred)
//   chi_hom  = (1 + v_el)/eta - 1       (detection-added noise)
//   chi_tot  = chi_line + chi_hom/T
//   I_AB     = 1/2 log2((V + chi_tot)/(1 + chi_tot))
//   lambda1..4 are the symplectic eigenvalues entering the Holevo bound
//   chi_BE   = G((l1-1)/2) + G((l2-1)/2) - G((l3-1)/2) - G((l4-1)/2)
//   delta_i  = beta * I_AB - chi_BE     (may be negative: no key)
struct SecurityQuantities {
    double v = 0.0;
    double chi_line = 0.0;
    double chi_hom = 0.0;
    double chi_tot = 0.0;
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
    double lambda[4] = {0.0, 0.0, 0.0, 0.0};
    double i_ab = 0.0;
    double chi_be = 0.0;
    double delta_i = 0.0;
};

// Four cumulative stages of the practical rate budget over a loss grid.
struct RateWaterfall {
    std::vector<double> loss_db;
    std::vector<double> distance_km;
    std::vector<double> ideal_rate;              // eps = 0, beta = 1, duty = 1
    std::vector<double> rate_after_excess_noise; // realistic eps
    std::vector<double> rate_after_beta;         // finite reconciliation efficiency
    std::vector<double> rate_after_duty;         // post-processing duty factor
};

// G(x) = (x+1)log2(x+1) - x log2 x, with the x->0 limit 0. Bits.
double g_function(double x);

double chi_line(double t, double epsilon);
double chi_hom(double eta, double v_el);

// 1/2 log2((V + chi_tot)/(1 + chi_tot)), bits per pulse.
double mutual_information(const LinkParams& params);

// Full evaluation of the bound; throws std::domain_error if the discriminants
// or eigenvalues come out inconsistent beyond tolerance (1e-9).
SecurityQuantities holevo_bound(const LinkParams& params);

// beta * I_AB - chi_BE. Negative values are returned, not raised.
double secret_fraction(const LinkParams& params);

// Largest distance with secret_fraction > 0, by bisection to 0.01 km.
// Returns 0 when no key is possible even back to back.
double max_distance(const LinkParams& params, const FiberModel& fiber);

struct LossGrid {
    double min_db = 0.0;
    double max_db = 6.0;
    double step_db = 0.05;
};

// duty_factor multiplies the final stage only (stage ordering is preserved
// by construction). The waterfall applies eps = 0.04 and beta = 0.9 for the
// realistic stages regardless of params.epsilon/params.beta, matching the
// published rate-drop accounting.
RateWaterfall rate_waterfall(const LinkParams& params, const FiberModel& fiber,
                             double duty_factor, const LossGrid& grid = {});

struct RateCurvePoint {
    double epsilon = 0.0;
    double delta_i = 0.0;        // bits per pulse
    double rate_bits_per_s = 0.0;
};

// Secret rate versus excess noise with all other parameters fixed.
std::vector<RateCurvePoint> rate_vs_excess_noise(const LinkParams& params,
                                                 const std::vector<double>& eps_grid);

} // namespace cvqkd
