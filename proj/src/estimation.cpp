#include "cvqkd/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cvqkd/rng.hpp"

namespace cvqkd {

Quantizer16 Quantizer16::for_modulation(double v_a_nominal) {
    if (!(v_a_nominal > 0.0))
        throw std::invalid_argument("Quantizer16: nonpositive modulation variance");
    Quantizer16 q;
    const double hi = 5.0 * std::sqrt(v_a_nominal);
    q.lo = -hi;
    q.step = 2.0 * hi / 65536.0;
    return q;
}

std::uint16_t Quantizer16::encode(double x) const {
    double k = std::floor((x - lo) / step);
    if (k < 0.0) k = 0.0;
    if (k > 65535.0) k = 65535.0;
    return static_cast<std::uint16_t>(k);
}

double Quantizer16::decode(std::uint16_t code) const {
    return lo + (static_cast<double>(code) + 0.5) * step;
}

Disclosure disclose(const QuadratureBlock& block, double fraction, double v_a_nominal,
                    std::uint64_t seed, LeakageLedger& ledger) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw std::invalid_argument("disclose: fraction must be in (0,1)");
    const std::size_t n = block.n_pulses;
    const std::size_t n_disc = static_cast<std::size_t>(fraction * static_cast<double>(n));
    if (n_disc == 0 || n_disc == n)
        throw std::invalid_argument("disclose: degenerate split");

    // partial Fisher-Yates over the index set, shared seed on both sides
    std::vector<std::uint32_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<std::uint32_t>(i);
    ChaChaRng rng(seed, 5);
    for (std::size_t i = 0; i < n_disc; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(idx[i], idx[j]);
    }

    Disclosure d;
    d.disclosed_indices.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_disc));
    d.key_indices.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_disc), idx.end());
    std::sort(d.disclosed_indices.begin(), d.disclosed_indices.end());
    std::sort(d.key_indices.begin(), d.key_indices.end());

    d.quantizer = Quantizer16::for_modulation(v_a_nominal);
    d.alice_x.reserve(n_disc);
    d.alice_p.reserve(n_disc);
    for (std::uint32_t i : d.disclosed_indices) {
        d.alice_x.push_back(d.quantizer.decode(d.quantizer.encode(block.alice_x[i])));
        d.alice_p.push_back(d.quantizer.decode(d.quantizer.encode(block.alice_p[i])));
    }
    ledger.estimation_bits += 32ull * n_disc; // 16 bits per component, two components
    return d;
}

EstimationResult estimate(const std::vector<double>& alice_x,
                          const std::vector<double>& alice_p,
                          const std::vector<std::uint8_t>& bob_choice,
                          const std::vector<double>& bob_value,
                          const Calibration& cal,
                          std::size_t min_pairs) {
    const std::size_t n = alice_x.size();
    if (alice_p.size() != n || bob_choice.size() != n || bob_value.size() != n)
        throw std::invalid_argument("estimate: input length mismatch");
    if (n < min_pairs)
        throw std::invalid_argument("estimate: too few matched pairs");
    if (!(cal.n0 > 0.0)) throw std::invalid_argument("estimate: invalid calibration");

    const double inv_sqrt_n0 = 1.0 / std::sqrt(cal.n0);
    double sa = 0.0, sb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = bob_choice[i] ? alice_p[i] : alice_x[i];
        const double b = bob_value[i] * inv_sqrt_n0;
        sa += a;
        sb += b;
        saa += a * a;
        sbb += b * b;
        sab += a * b;
    }
    const double dn = static_cast<double>(n);
    const double ma = sa / dn, mb = sb / dn;
    const double var_a = saa / dn - ma * ma;
    const double var_b = sbb / dn - mb * mb;
    const double cov = sab / dn - ma * mb;

    if (!(var_a > 1e-9))
        throw std::invalid_argument("estimate: no modulation, T unidentifiable");

    const double eta = cal.eta;
    const double v_el = cal.v_el();
    const double ratio = cov / (std::sqrt(eta) * var_a);
    const double t_hat = ratio * ratio;
    if (!(t_hat > 0.0) || cov <= 0.0)
        throw std::invalid_argument("estimate: nonpositive transmittance estimate");

    EstimationResult r;
    r.n_disclosed = n;
    r.v_a_hat = var_a;
    r.t_hat = t_hat;
    r.v_b_hat = var_b;
    r.epsilon_hat = (var_b - 1.0 - v_el) / (eta * t_hat) - var_a;
    r.rho_squared = cov * cov / (var_a * var_b);

    // asymptotic standard errors from Gaussian fourth moments:
    //   Var(Saa) = 2 saa^2 / n                 Cov(Saa, Sab) = 2 saa sab / n
    //   Var(Sbb) = 2 sbb^2 / n                 Cov(Sab, Sbb) = 2 sab sbb / n
    //   Var(Sab) = (saa sbb + sab^2) / n       Cov(Saa, Sbb) = 2 sab^2 / n
    const double c_aa = 2.0 * var_a * var_a / dn;
    const double c_bb = 2.0 * var_b * var_b / dn;
    const double c_ab = (var_a * var_b + cov * cov) / dn;
    const double c_aa_ab = 2.0 * var_a * cov / dn;
    const double c_aa_bb = 2.0 * cov * cov / dn;
    const double c_ab_bb = 2.0 * cov * var_b / dn;

    r.se_v_a = std::sqrt(c_aa);

    const double rho2 = r.rho_squared;
    r.se_t = 2.0 * t_hat * std::sqrt(std::max(0.0, (1.0 / rho2 - 1.0) / dn));

    // delta method for eps_hat = (Sbb - 1 - v_el)/(eta T(Saa,Sab)) - Saa
    const double k = var_b - 1.0 - v_el;
    const double g_bb = 1.0 / (eta * t_hat);
    const double g_aa = -1.0 + 2.0 * k / (eta * t_hat * var_a);
    const double g_ab = -2.0 * k / (eta * t_hat * cov);
    const double var_eps = g_aa * g_aa * c_aa + g_ab * g_ab * c_ab + g_bb * g_bb * c_bb +
                           2.0 * (g_aa * g_ab * c_aa_ab + g_aa * g_bb * c_aa_bb +
                                  g_ab * g_bb * c_ab_bb);
    r.se_epsilon = std::sqrt(std::max(0.0, var_eps));

    const double rho = std::sqrt(std::min(1.0, rho2));
    r.se_rho_squared = 2.0 * rho * (1.0 - rho2) / std::sqrt(dn);
    return r;
}

AgreedSecurity agree_security(const EstimationResult& est, const Calibration& cal,
                              double beta, double pulse_rate_hz) {
    if (!(est.t_hat > 0.0))
        throw std::invalid_argument("agree_security: nonpositive transmittance estimate");
    if (est.t_hat > 1.2)
        throw std::invalid_argument("agree_security: transmittance estimate beyond overshoot band");
    AgreedSecurity out;
    out.params.v_a = est.v_a_hat;
    out.params.t = std::min(est.t_hat, 1.0);
    out.params.epsilon = std::max(est.epsilon_hat, 0.0); // conservative clamp for the bound
    out.params.eta = cal.eta;
    out.params.v_el = cal.v_el();
    out.params.beta = beta;
    out.params.pulse_rate_hz = pulse_rate_hz;
    out.sq = holevo_bound(out.params);
    out.abort = !(out.sq.delta_i > 0.0);
    return out;
}

} // namespace cvqkd
