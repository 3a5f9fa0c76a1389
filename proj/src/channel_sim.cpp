#include "cvqkd/channel_sim.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "cvqkd/rng.hpp"
#include "cvqkd/sha256.hpp"

namespace cvqkd {

double NoiseScript::epsilon_at(double pulse_index) const {
    if (points.empty()) throw std::logic_error("NoiseScript: empty script queried");
    if (pulse_index <= points.front().pulse_index) return points.front().epsilon;
    if (pulse_index >= points.back().pulse_index) return points.back().epsilon;
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (pulse_index <= points[i].pulse_index) {
            const auto& a = points[i - 1];
            const auto& b = points[i];
            const double w = (pulse_index - a.pulse_index) / (b.pulse_index - a.pulse_index);
            return a.epsilon + w * (b.epsilon - a.epsilon);
        }
    }
    return points.back().epsilon;
}

void NoiseScript::validate() const {
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].epsilon < 0.0 || points[i].epsilon > 0.1)
            throw std::invalid_argument("NoiseScript: epsilon outside [0, 0.1]");
        if (i > 0 && points[i].pulse_index <= points[i - 1].pulse_index)
            throw std::invalid_argument("NoiseScript: pulse indices not increasing");
    }
}

QuadratureBlock generate_block(const LinkParams& params, const NoiseScript& script,
                               std::size_t n_pulses, double n0, std::uint64_t seed) {
    params.validate();
    script.validate();
    if (n_pulses == 0) throw std::invalid_argument("generate_block: empty block");
    if (!(n0 > 0.0)) throw std::invalid_argument("generate_block: n0 must be > 0");

    QuadratureBlock blk;
    blk.n_pulses = n_pulses;
    blk.n0 = n0;
    blk.seed = seed;
    blk.alice_x.resize(n_pulses);
    blk.alice_p.resize(n_pulses);
    blk.bob_choice.resize(n_pulses);
    blk.bob_value.resize(n_pulses);

    // independent streams: modulation, Bob's basis choice, channel noise
    ChaChaRng mod_rng(seed, 1);
    ChaChaRng choice_rng(seed, 2);
    ChaChaRng noise_rng(seed, 3);

    const double sig_a = std::sqrt(params.v_a);
    const double gain = std::sqrt(params.eta * params.t) * std::sqrt(n0);
    const double eta_t = params.eta * params.t;

    for (std::size_t i = 0; i < n_pulses; ++i) {
        const double ax = sig_a * mod_rng.gaussian();
        const double ap = sig_a * mod_rng.gaussian();
        blk.alice_x[i] = ax;
        blk.alice_p[i] = ap;
        const bool measure_p = choice_rng.coin();
        blk.bob_choice[i] = measure_p ? 1 : 0;
        const double eps = script.empty() ? params.epsilon
                                          : script.epsilon_at(static_cast<double>(i));
        const double noise_var = n0 * (1.0 + eta_t * eps + params.v_el);
        const double q = measure_p ? ap : ax;
        blk.bob_value[i] = gain * q + std::sqrt(noise_var) * noise_rng.gaussian();
    }
    return blk;
}

CalibrationFrames calibration_frames(const LinkParams& params, double n0,
                                     std::size_t n_samples, std::uint64_t seed) {
    params.validate();
    if (n_samples < 100'000)
        throw std::invalid_argument("calibration_frames: need at least 1e5 samples");
    ChaChaRng rng(seed, 4);
    const double lo_sigma = std::sqrt(n0 * (1.0 + params.v_el));
    const double dark_sigma = std::sqrt(n0 * params.v_el);
    double lo_ss = 0.0, lo_sum = 0.0, dk_ss = 0.0, dk_sum = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double lo = lo_sigma * rng.gaussian();
        const double dk = dark_sigma * rng.gaussian();
        lo_sum += lo;
        lo_ss += lo * lo;
        dk_sum += dk;
        dk_ss += dk * dk;
    }
    const double n = static_cast<double>(n_samples);
    CalibrationFrames f;
    f.n_samples = n_samples;
    f.lo_only_variance = lo_ss / n - (lo_sum / n) * (lo_sum / n);
    f.dark_variance = dk_ss / n - (dk_sum / n) * (dk_sum / n);
    return f;
}

NoiseScript drift_script_from_phase_model(const PhaseDriftModel& model, double v_a) {
    if (model.drift_rad_per_s < 0.0 || model.jitter_amplitude_rad < 0.0)
        throw std::invalid_argument("drift_script_from_phase_model: negative rate or amplitude");
    if (!(model.block_ms > 0.0) || !(model.pulse_rate_hz > 0.0))
        throw std::invalid_argument("drift_script_from_phase_model: nonpositive block or rate");

    const double block_s = model.block_ms * 1e-3;
    const double pulses_per_block = model.pulse_rate_hz * block_s;
    const std::size_t n_blocks =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(model.horizon_s / block_s)));

    // Residual phase variance per evaluation block. An uncompensated linear
    // ramp of total swing D has variance D^2/12 about its mean; the counter
    // ramp cancels it. Fast jitter (sinusoidal, many periods per block)
    // contributes amplitude^2/2 regardless of compensation.
    const double swing = model.drift_rad_per_s * block_s;
    double phi2 = model.jitter_amplitude_rad * model.jitter_amplitude_rad / 2.0;
    if (!model.ramp_compensated) phi2 += swing * swing / 12.0;

    double eps = v_a * phi2;
    if (eps > 0.1) eps = 0.1; // observed ceiling of the effect
    if (eps < 0.0) eps = 0.0;

    NoiseScript script;
    script.points.reserve(n_blocks + 1);
    for (std::size_t b = 0; b <= n_blocks; ++b)
        script.points.push_back({static_cast<double>(b) * pulses_per_block, eps});
    return script;
}

namespace {
constexpr char kBlockMagic[8] = {'c', 'v', 'q', 'k', 'd', 'b', 'l', 'k'};

void put_u64(std::ofstream& os, std::uint64_t v) {
    std::uint8_t b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<std::uint8_t>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::ifstream& is) {
    std::uint8_t b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
    return v;
}

std::uint64_t params_fingerprint(const LinkParams& p) {
    double fields[7] = {p.v_a, p.t, p.epsilon, p.eta, p.v_el, p.beta, p.pulse_rate_hz};
    auto d = Sha256::digest(fields, sizeof(fields));
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(d[i]) << (8 * i);
    return v;
}
} // namespace

void dump_block(const QuadratureBlock& block, const LinkParams& params, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("dump_block: cannot open " + path);
    os.write(kBlockMagic, sizeof(kBlockMagic));
    put_u64(os, block.n_pulses);
    put_u64(os, block.seed);
    put_u64(os, params_fingerprint(params));
    std::uint64_t n0_bits;
    std::memcpy(&n0_bits, &block.n0, 8);
    put_u64(os, n0_bits);
    auto write_doubles = [&](const std::vector<double>& v) {
        os.write(reinterpret_cast<const char*>(v.data()),
                 static_cast<std::streamsize>(v.size() * sizeof(double)));
    };
    write_doubles(block.alice_x);
    write_doubles(block.alice_p);
    os.write(reinterpret_cast<const char*>(block.bob_choice.data()),
             static_cast<std::streamsize>(block.bob_choice.size()));
    write_doubles(block.bob_value);
    if (!os) throw std::runtime_error("dump_block: write failed for " + path);
}

QuadratureBlock load_block(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_block: cannot open " + path);
    char magic[8];
    is.read(magic, 8);
    if (std::memcmp(magic, kBlockMagic, 8) != 0)
        throw std::runtime_error("load_block: bad magic in " + path);
    QuadratureBlock blk;
    blk.n_pulses = get_u64(is);
    blk.seed = get_u64(is);
    (void)get_u64(is); // params fingerprint, informational
    std::uint64_t n0_bits = get_u64(is);
    std::memcpy(&blk.n0, &n0_bits, 8);
    blk.alice_x.resize(blk.n_pulses);
    blk.alice_p.resize(blk.n_pulses);
    blk.bob_choice.resize(blk.n_pulses);
    blk.bob_value.resize(blk.n_pulses);
    auto read_doubles = [&](std::vector<double>& v) {
        is.read(reinterpret_cast<char*>(v.data()),
                static_cast<std::streamsize>(v.size() * sizeof(double)));
    };
    read_doubles(blk.alice_x);
    read_doubles(blk.alice_p);
    is.read(reinterpret_cast<char*>(blk.bob_choice.data()),
            static_cast<std::streamsize>(blk.bob_choice.size()));
    read_doubles(blk.bob_value);
    if (!is) throw std::runtime_error("load_block: truncated file " + path);
    return blk;
}

} // namespace cvqkd
