#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <set>

#include "cvqkd/channel_sim.hpp"
#include "cvqkd/estimation.hpp"
#include "cvqkd/model_core.hpp"

using namespace cvqkd;

namespace {
LinkParams reference_params() {
    LinkParams p;
    p.v_a = 10.0;
    p.t = 0.51;
    p.epsilon = 0.01;
    p.eta = 0.6;
    p.v_el = 0.01;
    p.beta = 0.9;
    return p;
}

struct Prepared {
    Disclosure disc;
    std::vector<std::uint8_t> bob_choice;
    std::vector<double> bob_value;
    LeakageLedger ledger;
};

Prepared prepare(const QuadratureBlock& blk, double fraction, double v_a_nom,
                 std::uint64_t seed) {
    Prepared out;
    out.disc = disclose(blk, fraction, v_a_nom, seed, out.ledger);
    out.bob_choice.reserve(out.disc.disclosed_indices.size());
    out.bob_value.reserve(out.disc.disclosed_indices.size());
    for (auto i : out.disc.disclosed_indices) {
        out.bob_choice.push_back(blk.bob_choice[i]);
        out.bob_value.push_back(blk.bob_value[i]);
    }
    return out;
}
} // namespace

TEST_CASE("disclose splits deterministically and charges the ledger") {
    const LinkParams p = reference_params();
    const auto blk = generate_block(p, {}, 50000, 1.0, 77);

    LeakageLedger l1, l2;
    const auto d1 = disclose(blk, 0.5, p.v_a, 1234, l1);
    const auto d2 = disclose(blk, 0.5, p.v_a, 1234, l2);
    CHECK(d1.disclosed_indices == d2.disclosed_indices);
    CHECK(d1.key_indices == d2.key_indices);
    CHECK(d1.alice_x == d2.alice_x);

    CHECK(d1.disclosed_indices.size() == 25000);
    CHECK(l1.estimation_bits == 32ull * 25000);

    // disclosed and key indices partition the block
    std::set<std::uint32_t> all(d1.disclosed_indices.begin(), d1.disclosed_indices.end());
    all.insert(d1.key_indices.begin(), d1.key_indices.end());
    CHECK(all.size() == blk.n_pulses);

    LeakageLedger l3;
    const auto d3 = disclose(blk, 0.5, p.v_a, 1235, l3);
    CHECK(d3.disclosed_indices != d1.disclosed_indices);

    CHECK_THROWS_AS(disclose(blk, 0.0, p.v_a, 1, l3), std::invalid_argument);
    CHECK_THROWS_AS(disclose(blk, 1.0, p.v_a, 1, l3), std::invalid_argument);
}

TEST_CASE("16-bit quantizer") {
    const auto q = Quantizer16::for_modulation(10.0);
    // quantization error bounded by half a step
    for (double x : {-3.7, 0.0, 1.234, 12.9}) {
        CHECK(std::abs(q.decode(q.encode(x)) - x) <= q.step * 0.5 + 1e-12);
    }
    // clamped at 5 sigma
    const double hi = 5.0 * std::sqrt(10.0);
    CHECK(q.decode(q.encode(100.0)) == doctest::Approx(hi - q.step / 2));
    CHECK(q.decode(q.encode(-100.0)) == doctest::Approx(-hi + q.step / 2));
}

TEST_CASE("estimation round trip at the reference point") {
    const LinkParams p = reference_params();
    const double n0 = 137.5;
    const std::size_t n = 400000;
    const auto blk = generate_block(p, {}, n, n0, 2024);
    const auto prep = prepare(blk, 0.5, p.v_a, 555);
    const Calibration cal{n0, 0.01 * n0, p.eta};

    const auto est = estimate(prep.disc.alice_x, prep.disc.alice_p, prep.bob_choice,
                              prep.bob_value, cal);
    CHECK(est.n_disclosed == n / 2);
    CHECK(std::abs(est.v_a_hat - p.v_a) < 3.0 * est.se_v_a);
    CHECK(std::abs(est.t_hat - p.t) < 3.0 * est.se_t);
    CHECK(std::abs(est.epsilon_hat - p.epsilon) < 3.0 * est.se_epsilon);

    const double rho2_expect = 0.751277909;
    CHECK(std::abs(est.rho_squared - rho2_expect) < 3.0 * est.se_rho_squared);

    // standard errors shrink like n^{-1/2}
    const auto blk_small = generate_block(p, {}, n / 4, n0, 2025);
    const auto prep_small = prepare(blk_small, 0.5, p.v_a, 556);
    const auto est_small = estimate(prep_small.disc.alice_x, prep_small.disc.alice_p,
                                    prep_small.bob_choice, prep_small.bob_value, cal);
    CHECK(est_small.se_t == doctest::Approx(2.0 * est.se_t).epsilon(0.1));
}

TEST_CASE("perfect channel correlation") {
    LinkParams p = reference_params();
    p.t = 1.0;
    p.epsilon = 0.0;
    p.eta = 1.0;
    p.v_el = 0.0;
    const auto blk = generate_block(p, {}, 200000, 1.0, 31);
    const auto prep = prepare(blk, 0.5, p.v_a, 32);
    const Calibration cal{1.0, 0.0, 1.0};
    const auto est = estimate(prep.disc.alice_x, prep.disc.alice_p, prep.bob_choice,
                              prep.bob_value, cal);
    // rho^2 = V_A / (V_A + 1)
    CHECK(std::abs(est.rho_squared - 10.0 / 11.0) < 3.0 * est.se_rho_squared);
}

TEST_CASE("degenerate estimation inputs") {
    const Calibration cal{1.0, 0.0, 0.6};
    std::vector<double> ax(20000, 0.0), ap(20000, 0.0), bv(20000, 0.0);
    std::vector<std::uint8_t> bc(20000, 0);
    // zero modulation: T unidentifiable
    CHECK_THROWS_AS(estimate(ax, ap, bc, bv, cal), std::invalid_argument);
    // too few pairs
    std::vector<double> sx(100, 1.0);
    std::vector<std::uint8_t> sc(100, 0);
    CHECK_THROWS_AS(estimate(sx, sx, sc, sx, cal), std::invalid_argument);
}

TEST_CASE("agree_security matches direct bound evaluation and aborts on no key") {
    const LinkParams p = reference_params();
    const auto blk = generate_block(p, {}, 200000, 1.0, 88);
    const auto prep = prepare(blk, 0.5, p.v_a, 89);
    const Calibration cal{1.0, 0.01, 0.6};
    const auto est = estimate(prep.disc.alice_x, prep.disc.alice_p, prep.bob_choice,
                              prep.bob_value, cal);

    const auto agreed = agree_security(est, cal, 0.9, p.pulse_rate_hz);
    CHECK_FALSE(agreed.abort);
    // the estimate-driven delta_i should be near the injected-parameter value
    const SecurityQuantities truth = holevo_bound(p);
    CHECK(agreed.sq.delta_i == doctest::Approx(truth.delta_i).epsilon(0.15));
    CHECK(agreed.params.epsilon >= 0.0);

    // inflated noise forces abort
    EstimationResult bad = est;
    bad.epsilon_hat = 0.5;
    const auto aborted = agree_security(bad, cal, 0.9, p.pulse_rate_hz);
    CHECK(aborted.abort);

    // nonpositive transmittance propagates as an error
    bad = est;
    bad.t_hat = 0.0;
    CHECK_THROWS_AS(agree_security(bad, cal, 0.9, p.pulse_rate_hz), std::invalid_argument);
}

TEST_CASE("estimates are computed identically from identical inputs") {
    // symmetry: both parties run the same routine on the same disclosed data
    const LinkParams p = reference_params();
    const auto blk = generate_block(p, {}, 60000, 1.0, 90);
    const auto prep = prepare(blk, 0.5, p.v_a, 91);
    const Calibration cal{1.0, 0.01, 0.6};
    const auto est_alice = estimate(prep.disc.alice_x, prep.disc.alice_p, prep.bob_choice,
                                    prep.bob_value, cal);
    const auto est_bob = estimate(prep.disc.alice_x, prep.disc.alice_p, prep.bob_choice,
                                  prep.bob_value, cal);
    CHECK(est_alice.v_a_hat == est_bob.v_a_hat);
    CHECK(est_alice.t_hat == est_bob.t_hat);
    CHECK(est_alice.epsilon_hat == est_bob.epsilon_hat);
    const auto a1 = agree_security(est_alice, cal, 0.9, p.pulse_rate_hz);
    const auto a2 = agree_security(est_bob, cal, 0.9, p.pulse_rate_hz);
    CHECK(a1.sq.delta_i == a2.sq.delta_i);
    CHECK(a1.sq.chi_be == a2.sq.chi_be);
}
