#include <doctest.h>

#include <stdexcept>
#include <array>
#include <algorithm>

#include <cmath>
#include <vector>

#include "cvqkd/channel_sim.hpp"
#include "cvqkd/model_core.hpp"
#include "cvqkd/security_bound.hpp"

using namespace cvqkd;

namespace {
LinkParams reference_params() {
    LinkParams p;
    p.v_a = 10.0;
    p.t = 0.51;
    p.epsilon = 0.01;
    p.eta = 0.6;
    p.v_el = 0.01;
    p.beta = 1.0;
    return p;
}

struct Moments {
    double var_a = 0.0, var_b = 0.0, cov = 0.0;
    std::size_t n = 0;
};

// moments of (chosen Alice quadrature, Bob value) pairs
Moments pair_moments(const QuadratureBlock& blk) {
    double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
    for (std::size_t i = 0; i < blk.n_pulses; ++i) {
        const double a = blk.bob_choice[i] ? blk.alice_p[i] : blk.alice_x[i];
        const double b = blk.bob_value[i];
        sa += a;
        sb += b;
        saa += a * a;
        sbb += b * b;
        sab += a * b;
    }
    const double n = static_cast<double>(blk.n_pulses);
    Moments m;
    m.n = blk.n_pulses;
    m.var_a = saa / n - (sa / n) * (sa / n);
    m.var_b = sbb / n - (sb / n) * (sb / n);
    m.cov = sab / n - (sa / n) * (sb / n);
    return m;
}
} // namespace

TEST_CASE("reproducibility: identical seeds, identical blocks") {
    const LinkParams p = reference_params();
    const NoiseScript none;
    const auto a = generate_block(p, none, 5000, 1.0, 99);
    const auto b = generate_block(p, none, 5000, 1.0, 99);
    CHECK(a.alice_x == b.alice_x);
    CHECK(a.alice_p == b.alice_p);
    CHECK(a.bob_choice == b.bob_choice);
    CHECK(a.bob_value == b.bob_value);
    const auto c = generate_block(p, none, 5000, 1.0, 100);
    CHECK(a.bob_value != c.bob_value);
}

TEST_CASE("vacuum limit: conditional variance is exactly the shot noise") {
    LinkParams p = reference_params();
    p.t = 1.0;
    p.eta = 1.0;
    p.epsilon = 0.0;
    p.v_el = 0.0;
    const std::size_t n = 400000;
    const auto blk = generate_block(p, {}, n, 1.0, 7);
    // residual g = b - sqrt(eta T) a has variance n0 = 1
    double ss = 0, s = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = blk.bob_choice[i] ? blk.alice_p[i] : blk.alice_x[i];
        const double g = blk.bob_value[i] - a;
        s += g;
        ss += g * g;
    }
    const double var = ss / n - (s / n) * (s / n);
    // var(sample variance of gaussian) = 2 sigma^4 / n
    CHECK(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / static_cast<double>(n)));
}

TEST_CASE("statistical contract at the reference point") {
    const LinkParams p = reference_params();
    const std::size_t n = 1'000'000;
    const double n0 = 137.5; // non-unit detector scale must not change SNU results
    const auto blk = generate_block(p, {}, n, n0, 12345);
    const Moments m = pair_moments(blk);
    const double dn = static_cast<double>(n);

    const SecurityQuantities q = holevo_bound(p);
    const double v_b_expect = p.eta * p.t * (q.v + q.chi_tot) * n0; // detector units
    const double cov_expect = std::sqrt(p.eta * p.t * n0) * p.v_a;
    const double rho2_expect = cov_expect * cov_expect / (p.v_a * v_b_expect);

    // five standard errors from gaussian fourth moments
    const double se_va = p.v_a * std::sqrt(2.0 / dn);
    const double se_vb = v_b_expect * std::sqrt(2.0 / dn);
    const double se_cov = std::sqrt((p.v_a * v_b_expect + cov_expect * cov_expect) / dn);

    CHECK(std::abs(m.var_a - p.v_a) < 5 * se_va);
    CHECK(std::abs(m.var_b - v_b_expect) < 5 * se_vb);
    CHECK(std::abs(m.cov - cov_expect) < 5 * se_cov);

    const double rho2 = m.cov * m.cov / (m.var_a * m.var_b);
    const double rho = std::sqrt(rho2_expect);
    const double se_rho2 = 2.0 * rho * (1.0 - rho2_expect) / std::sqrt(dn);
    CHECK(std::abs(rho2 - rho2_expect) < 5 * se_rho2);
    // closed form: rho^2 = eta T V_A / (eta T (V + chi_tot)) = 0.7513 here
    CHECK(rho2_expect == doctest::Approx(0.751277909).epsilon(1e-6));

    // both alice quadratures are centred with variance V_A
    double sx = 0, sxx = 0, sp = 0, spp = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += blk.alice_x[i];
        sxx += blk.alice_x[i] * blk.alice_x[i];
        sp += blk.alice_p[i];
        spp += blk.alice_p[i] * blk.alice_p[i];
    }
    CHECK(std::abs(sxx / dn - (sx / dn) * (sx / dn) - p.v_a) < 5 * se_va);
    CHECK(std::abs(spp / dn - (sp / dn) * (sp / dn) - p.v_a) < 5 * se_va);
    CHECK(std::abs(sx / dn) < 5 * std::sqrt(p.v_a / dn));
    CHECK(std::abs(sp / dn) < 5 * std::sqrt(p.v_a / dn));
}

TEST_CASE("bob choice is balanced and independent of values") {
    const LinkParams p = reference_params();
    const std::size_t n = 400000;
    const auto blk = generate_block(p, {}, n, 1.0, 321);

    std::size_t ones = 0;
    for (auto c : blk.bob_choice) ones += c;
    CHECK(std::abs(static_cast<double>(ones) - n / 2.0) < 5.0 * std::sqrt(n / 4.0));

    // chi-squared independence: bin bob values into 8 equal-count bins,
    // count choices per bin; df = 7, threshold ~= p = 1e-6
    std::vector<double> sorted = blk.bob_value;
    std::sort(sorted.begin(), sorted.end());
    std::array<double, 7> edges;
    for (int k = 1; k < 8; ++k) edges[k - 1] = sorted[n * k / 8];
    std::array<std::array<double, 8>, 2> cnt{};
    for (std::size_t i = 0; i < n; ++i) {
        const int bin = static_cast<int>(
            std::upper_bound(edges.begin(), edges.end(), blk.bob_value[i]) - edges.begin());
        cnt[blk.bob_choice[i]][bin] += 1.0;
    }
    double chi2 = 0.0;
    for (int b = 0; b < 8; ++b) {
        const double tot = cnt[0][b] + cnt[1][b];
        const double e0 = tot * (static_cast<double>(n - ones) / n);
        const double e1 = tot * (static_cast<double>(ones) / n);
        chi2 += (cnt[0][b] - e0) * (cnt[0][b] - e0) / e0;
        chi2 += (cnt[1][b] - e1) * (cnt[1][b] - e1) / e1;
    }
    CHECK(chi2 < 42.0); // chi^2_{7} quantile at 1 - 1e-6
}

TEST_CASE("calibration frames recover the injected shot noise") {
    LinkParams p = reference_params();
    const double n0 = 137.5;
    const auto frames = calibration_frames(p, n0, 1'000'000, 55);
    const Calibration cal = calibrate(frames.lo_only_variance, frames.dark_variance, p.eta);
    CHECK(cal.n0 == doctest::Approx(n0).epsilon(0.01));
    CHECK(cal.v_el() == doctest::Approx(p.v_el).epsilon(0.2)); // small quantity, wide rel band
    CHECK(frames.dark_variance / (frames.lo_only_variance - frames.dark_variance) ==
          doctest::Approx(0.01).epsilon(0.2));

    LinkParams noiseless = p;
    noiseless.v_el = 0.0;
    const auto f0 = calibration_frames(noiseless, n0, 100'000, 56);
    CHECK(f0.dark_variance == 0.0);
}

TEST_CASE("noise script shapes the excess noise over a block") {
    LinkParams p = reference_params();
    p.epsilon = 0.0;
    NoiseScript script;
    script.points = {{0.0, 0.0}, {100000.0, 0.1}};
    const std::size_t n = 200000;
    const auto blk = generate_block(p, script, n, 1.0, 9);
    // split into first and last quarter; excess noise raises conditional variance
    auto cond_var = [&](std::size_t lo, std::size_t hi) {
        double s = 0, ss = 0;
        const double gain = std::sqrt(p.eta * p.t);
        for (std::size_t i = lo; i < hi; ++i) {
            const double a = blk.bob_choice[i] ? blk.alice_p[i] : blk.alice_x[i];
            const double g = blk.bob_value[i] - gain * a;
            s += g;
            ss += g * g;
        }
        const double m = static_cast<double>(hi - lo);
        return ss / m - (s / m) * (s / m);
    };
    const double early = cond_var(0, n / 4);
    const double late = cond_var(3 * n / 4, n);
    // late quarter runs at eps = 0.1: variance 1 + v_el + eta T eps = 1.0406
    CHECK(early == doctest::Approx(1.01).epsilon(0.01));
    CHECK(late == doctest::Approx(1.0406).epsilon(0.01));
    CHECK(late > early);
}

TEST_CASE("noise script validation") {
    NoiseScript s;
    s.points = {{0.0, 0.05}, {10.0, 0.2}};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.points = {{10.0, 0.05}, {5.0, 0.02}};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("phase drift model") {
    PhaseDriftModel m;
    m.drift_rad_per_s = 0.0;
    m.ramp_compensated = false;
    auto s = drift_script_from_phase_model(m, 10.0);
    for (auto& pt : s.points) CHECK(pt.epsilon == 0.0);

    // 2 pi / 30 s drift over 100 ms blocks with the compensating ramp: ~0
    m.drift_rad_per_s = 2.0 * 3.14159265358979 / 30.0;
    m.ramp_compensated = true;
    s = drift_script_from_phase_model(m, 10.0);
    for (auto& pt : s.points) CHECK(pt.epsilon < 1e-6);

    // same drift uncompensated: eps = v_a * (rate * 0.1s)^2 / 12, small but nonzero
    m.ramp_compensated = false;
    s = drift_script_from_phase_model(m, 10.0);
    const double swing = m.drift_rad_per_s * 0.1;
    CHECK(s.points.front().epsilon == doctest::Approx(10.0 * swing * swing / 12.0).epsilon(1e-9));

    // strong uncompensated jitter saturates at the observed ceiling 0.1
    m.jitter_amplitude_rad = 0.5;
    s = drift_script_from_phase_model(m, 10.0);
    for (auto& pt : s.points) CHECK(pt.epsilon == doctest::Approx(0.1));
    CHECK_NOTHROW(s.validate());
}

TEST_CASE("empty blocks are rejected") {
    CHECK_THROWS_AS(generate_block(reference_params(), {}, 0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("block dump round trip") {
    const LinkParams p = reference_params();
    const auto blk = generate_block(p, {}, 1000, 137.5, 4242);
    const std::string path = "test_block_dump.bin";
    dump_block(blk, p, path);
    const auto back = load_block(path);
    CHECK(back.n_pulses == blk.n_pulses);
    CHECK(back.seed == blk.seed);
    CHECK(back.n0 == blk.n0);
    CHECK(back.alice_x == blk.alice_x);
    CHECK(back.alice_p == blk.alice_p);
    CHECK(back.bob_choice == blk.bob_choice);
    CHECK(back.bob_value == blk.bob_value);
    std::remove(path.c_str());
}
