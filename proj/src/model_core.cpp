#include "cvqkd/model_core.hpp"

#include <cmath>
#include <stdexcept>

namespace cvqkd {

void LinkParams::validate() const {
    if (!(v_a > 0.0)) throw std::invalid_argument("LinkParams: v_a must be > 0");
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("LinkParams: t must be in (0,1]");
    if (!(epsilon >= 0.0)) throw std::invalid_argument("LinkParams: epsilon must be >= 0");
    if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("LinkParams: eta must be in (0,1]");
    if (!(v_el >= 0.0)) throw std::invalid_argument("LinkParams: v_el must be >= 0");
    if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("LinkParams: beta must be in [0,1]");
    if (!(pulse_rate_hz > 0.0)) throw std::invalid_argument("LinkParams: pulse_rate_hz must be > 0");
}

double transmittance_from_db(double loss_db) {
    if (loss_db < 0.0) throw std::invalid_argument("transmittance_from_db: negative loss");
    return std::pow(10.0, -loss_db / 10.0);
}

double db_from_transmittance(double t) {
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("db_from_transmittance: t must be in (0,1]");
    return -10.0 * std::log10(t);
}

Calibration calibrate(double lo_only_variance, double dark_variance, double eta) {
    if (dark_variance < 0.0) throw std::invalid_argument("calibrate: negative dark variance");
    double n0 = lo_only_variance - dark_variance;
    if (!(n0 > 0.0)) throw std::invalid_argument("calibrate: LO frame does not exceed dark frame");
    return Calibration{n0, dark_variance, eta};
}

std::vector<double> normalize(const std::vector<double>& block_raw, const Calibration& cal) {
    std::vector<double> out = block_raw;
    normalize_in_place(out, cal);
    return out;
}

void normalize_in_place(std::vector<double>& block, const Calibration& cal) {
    if (!(cal.n0 > 0.0)) throw std::invalid_argument("normalize: invalid calibration");
    const double inv = 1.0 / std::sqrt(cal.n0);
    for (double& x : block) x *= inv;
}

} // namespace cvqkd
