#include "cvqkd/security_bound.hpp"

#include <cmath>
#include <stdexcept>

namespace cvqkd {

namespace {
constexpr double kDiscriminantTol = 1e-9; // cancellation slack near the lossless limit

double sqrt_clamped(double x, const char* what) {
    if (x < -kDiscriminantTol) throw std::domain_error(what);
    return std::sqrt(x > 0.0 ? x : 0.0);
}
} // namespace

double g_function(double x) {
    if (x < 0.0) throw std::invalid_argument("g_function: negative argument");
    if (x == 0.0) return 0.0;
    return (x + 1.0) * std::log2(x + 1.0) - x * std::log2(x);
}

double chi_line(double t, double epsilon) {
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("chi_line: t must be in (0,1]");
    if (epsilon < 0.0) throw std::invalid_argument("chi_line: negative excess noise");
    return 1.0 / t - 1.0 + epsilon;
}

double chi_hom(double eta, double v_el) {
    if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("chi_hom: eta must be in (0,1]");
    if (v_el < 0.0) throw std::invalid_argument("chi_hom: negative electronic noise");
    return (1.0 + v_el) / eta - 1.0;
}

double mutual_information(const LinkParams& p) {
    p.validate();
    const double v = p.v_a + 1.0;
    const double chi_tot = chi_line(p.t, p.epsilon) + chi_hom(p.eta, p.v_el) / p.t;
    return 0.5 * std::log2((v + chi_tot) / (1.0 + chi_tot));
}

SecurityQuantities holevo_bound(const LinkParams& p) {
    p.validate();
    SecurityQuantities q;
    q.v = p.v_a + 1.0;
    q.chi_line = chi_line(p.t, p.epsilon);
    q.chi_hom = chi_hom(p.eta, p.v_el);
    q.chi_tot = q.chi_line + q.chi_hom / p.t;
    q.i_ab = 0.5 * std::log2((q.v + q.chi_tot) / (1.0 + q.chi_tot));

    const double v = q.v;
    const double t = p.t;
    q.a = v * v * (1.0 - 2.0 * t) + 2.0 * t + t * t * (v + q.chi_line) * (v + q.chi_line);
    q.b = t * t * (v * q.chi_line + 1.0) * (v * q.chi_line + 1.0);
    const double sqrt_b = std::sqrt(q.b);
    const double denom = t * (v + q.chi_tot);
    q.c = (v * sqrt_b + t * (v + q.chi_line) + q.a * q.chi_hom) / denom;
    q.d = sqrt_b * (v + sqrt_b * q.chi_hom) / denom;

    const double disc_ab = sqrt_clamped(q.a * q.a - 4.0 * q.b, "holevo_bound: A^2 - 4B < 0");
    const double disc_cd = sqrt_clamped(q.c * q.c - 4.0 * q.d, "holevo_bound: C^2 - 4D < 0");
    q.lambda[0] = sqrt_clamped((q.a + disc_ab) / 2.0, "holevo_bound: lambda1^2 < 0");
    q.lambda[1] = sqrt_clamped((q.a - disc_ab) / 2.0, "holevo_bound: lambda2^2 < 0");
    q.lambda[2] = sqrt_clamped((q.c + disc_cd) / 2.0, "holevo_bound: lambda3^2 < 0");
    q.lambda[3] = sqrt_clamped((q.c - disc_cd) / 2.0, "holevo_bound: lambda4^2 < 0");

    double chi_be = 0.0;
    for (int i = 0; i < 4; ++i) {
        if (q.lambda[i] < 1.0 - kDiscriminantTol)
            throw std::domain_error("holevo_bound: symplectic eigenvalue below 1");
        const double nu = (q.lambda[i] - 1.0) / 2.0;
        chi_be += (i < 2 ? 1.0 : -1.0) * g_function(nu > 0.0 ? nu : 0.0);
    }
    q.chi_be = chi_be;
    q.delta_i = p.beta * q.i_ab - q.chi_be;
    return q;
}

double secret_fraction(const LinkParams& p) {
    return holevo_bound(p).delta_i;
}

double max_distance(const LinkParams& params, const FiberModel& fiber) {
    if (fiber.loss_db_per_km <= 0.0)
        throw std::invalid_argument("max_distance: loss coefficient must be > 0");
    auto delta_i_at = [&](double km) {
        LinkParams p = params;
        p.t = transmittance_from_db(km * fiber.loss_db_per_km);
        return secret_fraction(p);
    };
    if (delta_i_at(0.0) <= 0.0) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (delta_i_at(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e4) return hi; // no crossing within any physical range
    }
    while (hi - lo > 0.01) {
        const double mid = 0.5 * (lo + hi);
        (delta_i_at(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

RateWaterfall rate_waterfall(const LinkParams& params, const FiberModel& fiber,
                             double duty_factor, const LossGrid& grid) {
    if (duty_factor < 0.0 || duty_factor > 1.0)
        throw std::invalid_argument("rate_waterfall: duty factor must be in [0,1]");
    RateWaterfall w;
    const double rate = params.pulse_rate_hz;
    for (double db = grid.min_db; db <= grid.max_db + 1e-12; db += grid.step_db) {
        LinkParams p = params;
        p.t = transmittance_from_db(db);

        p.epsilon = 0.0;
        p.beta = 1.0;
        const double ideal = secret_fraction(p) * rate;

        p.epsilon = 0.04;
        const double after_eps = secret_fraction(p) * rate;

        p.beta = 0.9;
        const double after_beta = secret_fraction(p) * rate;

        w.loss_db.push_back(db);
        w.distance_km.push_back(fiber.loss_db_per_km > 0.0 ? db / fiber.loss_db_per_km : 0.0);
        w.ideal_rate.push_back(ideal);
        w.rate_after_excess_noise.push_back(after_eps);
        w.rate_after_beta.push_back(after_beta);
        w.rate_after_duty.push_back(after_beta * duty_factor);
    }
    return w;
}

std::vector<RateCurvePoint> rate_vs_excess_noise(const LinkParams& params,
                                                 const std::vector<double>& eps_grid) {
    std::vector<RateCurvePoint> out;
    out.reserve(eps_grid.size());
    for (double e : eps_grid) {
        LinkParams p = params;
        p.epsilon = e;
        const double di = secret_fraction(p);
        out.push_back({e, di, di * params.pulse_rate_hz});
    }
    return out;
}

} // namespace cvqkd
