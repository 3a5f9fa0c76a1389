#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "cvqkd/model_core.hpp"
#include "cvqkd/rng.hpp"
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
    p.pulse_rate_hz = 500e3;
    return p;
}

LinkParams random_valid_params(ChaChaRng& rng) {
    LinkParams p;
    p.v_a = 0.5 + 29.5 * rng.uniform();
    p.t = 0.05 + 0.95 * rng.uniform();
    p.epsilon = 0.1 * rng.uniform();
    p.eta = 0.3 + 0.7 * rng.uniform();
    p.v_el = 0.1 * rng.uniform();
    p.beta = rng.uniform();
    return p;
}
} // namespace

TEST_CASE("g_function") {
    CHECK(g_function(0.0) == 0.0);
    CHECK(g_function(1.0) == doctest::Approx(2.0).epsilon(1e-12));
    // high-precision evaluation of the closed form
    CHECK(g_function(2.45) == doctest::Approx(2.996442163).epsilon(1e-9));
    CHECK_THROWS_AS(g_function(-1e-9), std::invalid_argument);
}

TEST_CASE("noise figures") {
    CHECK(chi_line(1.0, 0.0) == doctest::Approx(0.0));
    CHECK(chi_line(0.5, 0.0) == doctest::Approx(1.0));
    CHECK(chi_line(0.51, 0.01) == doctest::Approx(0.9707843137).epsilon(1e-9));
    CHECK_THROWS_AS(chi_line(0.0, 0.0), std::invalid_argument);

    CHECK(chi_hom(1.0, 0.0) == doctest::Approx(0.0));
    CHECK(chi_hom(0.5, 0.0) == doctest::Approx(1.0));
    CHECK(chi_hom(0.6, 0.01) == doctest::Approx(0.6833333333).epsilon(1e-9));
    CHECK_THROWS_AS(chi_hom(0.0, 0.0), std::invalid_argument);
}

TEST_CASE("mutual information") {
    LinkParams p = reference_params();
    CHECK(mutual_information(p) == doctest::Approx(1.00369672215052).epsilon(1e-10));

    // no modulation, no information
    p.v_a = 1e-12;
    CHECK_THROWS(mutual_information(LinkParams{0.0, 0.51, 0.01, 0.6, 0.01, 1.0, 500e3}));
    p = reference_params();
    p.v_a = 1e-9;
    CHECK(mutual_information(p) == doctest::Approx(0.0).epsilon(1e-8));

    // perfect apparatus: 1/2 log2(11)
    p = reference_params();
    p.t = 1.0;
    p.epsilon = 0.0;
    p.eta = 1.0;
    p.v_el = 0.0;
    CHECK(mutual_information(p) == doctest::Approx(0.5 * std::log2(11.0)).epsilon(1e-12));
}

TEST_CASE("holevo bound at the reference point") {
    // frozen from a 50-digit evaluation of the same expression block
    const SecurityQuantities q = holevo_bound(reference_params());
    CHECK(q.chi_be == doctest::Approx(0.741762783779989).epsilon(1e-9));
    CHECK(q.lambda[0] == doctest::Approx(5.90376472851).epsilon(1e-9));
    CHECK(q.lambda[1] == doctest::Approx(1.00886472851).epsilon(1e-9));
    CHECK(q.lambda[2] == doctest::Approx(3.62720029297).epsilon(1e-9));
    CHECK(q.lambda[3] == doctest::Approx(1.0024929428).epsilon(1e-9));
    CHECK(q.a == doctest::Approx(35.87224601).epsilon(1e-9));
    CHECK(q.b == doctest::Approx(35.47512721).epsilon(1e-9));
    CHECK(q.c == doctest::Approx(14.1615740657147).epsilon(1e-9));
    CHECK(q.d == doctest::Approx(13.2222609429029).epsilon(1e-9));
}

TEST_CASE("lossless noiseless channel leaks nothing") {
    LinkParams p = reference_params();
    p.t = 1.0;
    p.epsilon = 0.0;
    p.eta = 1.0;
    p.v_el = 0.0;
    for (double v_a : {0.3, 1.0, 10.0, 25.0}) {
        p.v_a = v_a;
        const SecurityQuantities q = holevo_bound(p);
        CHECK(std::abs(q.chi_be) <= 1e-9);
        for (int i = 0; i < 4; ++i) CHECK(std::abs(q.lambda[i] - 1.0) <= 1e-9);
    }
}

TEST_CASE("secret fraction at reference parameters") {
    LinkParams p = reference_params();
    const double di_beta1 = secret_fraction(p);
    CHECK(di_beta1 == doctest::Approx(0.261933938370528).epsilon(1e-9));
    // about 131 kbit/s at 500 kHz, order-consistent with the published 100 kbit/s
    CHECK(di_beta1 * p.pulse_rate_hz / 1000.0 == doctest::Approx(130.96697).epsilon(1e-6));

    p.beta = 0.9;
    CHECK(secret_fraction(p) == doctest::Approx(0.161564266155476).epsilon(1e-9));

    p.beta = 0.0;
    const SecurityQuantities q = holevo_bound(p);
    CHECK(secret_fraction(p) == doctest::Approx(-q.chi_be));
    CHECK(secret_fraction(p) <= 0.0);
}

TEST_CASE("eigenvalue floor and chi_be sign over a random sweep") {
    ChaChaRng rng(20250809);
    for (int i = 0; i < 10000; ++i) {
        const LinkParams p = random_valid_params(rng);
        const SecurityQuantities q = holevo_bound(p);
        for (int k = 0; k < 4; ++k) CHECK(q.lambda[k] >= 1.0 - 1e-9);
        CHECK(q.chi_be >= -1e-9);
        CHECK(q.i_ab >= 0.0);
    }
}

TEST_CASE("monotonicity over the operating region") {
    // Checked where a key exists (delta_i > 0). The secret fraction is
    // monotone in epsilon, t and beta there; it is NOT globally monotone in
    // v_el or eta under the realistic model, where trusted receiver noise can
    // raise the reverse-reconciliation rate, so for those two only the
    // mutual information is required to be monotone.
    ChaChaRng rng(77);
    int used = 0;
    for (int i = 0; i < 4000 && used < 400; ++i) {
        LinkParams p = random_valid_params(rng);
        p.beta = 0.5 + 0.5 * rng.uniform();
        const double base = secret_fraction(p);
        if (base <= 0.0) continue;
        ++used;

        LinkParams q = p;
        q.epsilon = p.epsilon + 0.01;
        CHECK(secret_fraction(q) <= base + 1e-12);

        q = p;
        q.t = std::min(1.0, p.t * 1.05);
        CHECK(secret_fraction(q) >= base - 1e-12);

        q = p;
        q.beta = std::min(1.0, p.beta + 0.05);
        CHECK(secret_fraction(q) >= base - 1e-12);

        q = p;
        q.v_el = p.v_el + 0.01;
        CHECK(mutual_information(q) <= mutual_information(p) + 1e-12);

        q = p;
        q.eta = std::min(1.0, p.eta * 1.05);
        CHECK(mutual_information(q) >= mutual_information(p) - 1e-12);
    }
    CHECK(used >= 300);
}

TEST_CASE("max distance") {
    LinkParams p = reference_params();
    p.epsilon = 0.04;
    p.beta = 0.9;
    FiberModel fiber{0.2, 0.0};
    // frozen value of the closed-form root with these parameters
    const double d = max_distance(p, fiber);
    CHECK(d == doctest::Approx(39.47).epsilon(0.001));

    // beta = 1, eps = 0 reaches strictly farther
    LinkParams ideal = p;
    ideal.beta = 1.0;
    ideal.epsilon = 0.0;
    CHECK(max_distance(ideal, fiber) > d);

    // noise so large that no key exists even back to back
    LinkParams dead = p;
    dead.epsilon = 2.0;
    CHECK(max_distance(dead, fiber) == 0.0);
}

TEST_CASE("rate waterfall ordering and zero crossings") {
    const LinkParams p = reference_params();
    const FiberModel fiber{0.2, 0.0};
    const double duty = 5.0 / 34.0;
    const RateWaterfall w = rate_waterfall(p, fiber, duty);
    REQUIRE(w.loss_db.size() == w.ideal_rate.size());
    for (std::size_t i = 0; i < w.loss_db.size(); ++i) {
        CHECK(w.rate_after_excess_noise[i] <= w.ideal_rate[i] + 1e-9);
        CHECK(w.rate_after_beta[i] <= w.rate_after_excess_noise[i] + 1e-9);
        CHECK(w.rate_after_duty[i] <= w.rate_after_beta[i] + 1e-9);
        // duty scales but does not move the root
        CHECK(((w.rate_after_beta[i] > 0.0) == (w.rate_after_duty[i] > 0.0)));
    }
    // stage (c) near 3 dB with the single-core duty factor
    std::size_t i3 = 0;
    for (std::size_t i = 0; i < w.loss_db.size(); ++i)
        if (std::abs(w.loss_db[i] - 3.0) < std::abs(w.loss_db[i3] - 3.0)) i3 = i;
    CHECK(w.rate_after_duty[i3] / 1000.0 == doctest::Approx(7.866).epsilon(0.01));
}

TEST_CASE("rate versus excess noise") {
    LinkParams p = reference_params();
    std::vector<double> grid;
    for (double e = 0.0; e <= 0.1 + 1e-12; e += 0.005) grid.push_back(e);
    const auto curve = rate_vs_excess_noise(p, grid);
    REQUIRE(curve.size() == grid.size());
    for (std::size_t i = 1; i < curve.size(); ++i)
        CHECK(curve[i].delta_i < curve[i - 1].delta_i);
    // eps = 0 endpoint equals the unperturbed secret fraction
    LinkParams p0 = p;
    p0.epsilon = 0.0;
    CHECK(curve.front().delta_i == doctest::Approx(secret_fraction(p0)).epsilon(1e-12));
    CHECK(curve.front().delta_i == doctest::Approx(0.287087273943034).epsilon(1e-9));
}
