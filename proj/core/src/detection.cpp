#include "ionsense/detection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ionsense::photon {

void DetectionConfig::validate() const {
    if (!(gamma > 0.0)) throw std::invalid_argument("detection: gamma must be > 0");
    if (!(wavevector > 0.0)) throw std::invalid_argument("detection: wavevector must be > 0");
    if (!std::isfinite(detuning)) throw std::invalid_argument("detection: detuning must be finite");
    if (!(base_rate >= 0.0)) throw std::invalid_argument("detection: base_rate must be >= 0");
    if (!(hardware_delay >= 0.0))
        throw std::invalid_argument("detection: hardware_delay must be >= 0");
    if (!(detect_window > hardware_delay))
        throw std::invalid_argument("detection: detect_window must exceed hardware_delay");
    if (!(damping_time > 0.0))
        throw std::invalid_argument("detection: damping_time must be > 0 (may be inf)");
    if (!(bin_width > 0.0)) throw std::invalid_argument("detection: bin_width must be > 0");
    if (bin_width > detect_window / 10.0)
        throw std::invalid_argument("detection: bin_width must be <= detect_window / 10");
}

namespace {

inline double lorentzian(double detuning, double half_gamma) {
    const double hg2 = half_gamma * half_gamma;
    return hg2 / (detuning * detuning + hg2);
}

}  // namespace

double scatter_rate(double velocity, const DetectionConfig& cfg) {
    switch (cfg.rate_model) {
        case RateModel::linear: {
            const double modulation = (2.0 / cfg.gamma) * cfg.wavevector * velocity;
            return cfg.base_rate * std::max(0.0, 1.0 + modulation);
        }
        case RateModel::lorentzian: {
            const double half_gamma = 0.5 * cfg.gamma;
            const double effective = cfg.detuning + cfg.wavevector * velocity;
            return cfg.base_rate * lorentzian(effective, half_gamma) /
                   lorentzian(cfg.detuning, half_gamma);
        }
    }
    throw std::logic_error("scatter_rate: unknown rate model");
}

double rate_upper_bound(double max_speed, const DetectionConfig& cfg) {
    if (!(max_speed >= 0.0))
        throw std::invalid_argument("rate_upper_bound: max_speed must be >= 0");
    switch (cfg.rate_model) {
        case RateModel::linear:
            return cfg.base_rate *
                   (1.0 + (2.0 / cfg.gamma) * cfg.wavevector * max_speed);
        case RateModel::lorentzian: {
            const double half_gamma = 0.5 * cfg.gamma;
            const double excursion = cfg.wavevector * max_speed;
            // L is even and decreasing in |detuning|; the bound sits at the
            // closest approach of detuning + k v to zero.
            const double closest = std::max(0.0, std::abs(cfg.detuning) - excursion);
            return cfg.base_rate * lorentzian(closest, half_gamma) /
                   lorentzian(cfg.detuning, half_gamma);
        }
    }
    throw std::logic_error("rate_upper_bound: unknown rate model");
}

std::string to_string(RateModel m) {
    return m == RateModel::linear ? "linear" : "lorentzian";
}

std::string to_string(AcquisitionMode m) {
    return m == AcquisitionMode::tac_first_photon ? "tac_first_photon" : "mcs_multi_photon";
}

RateModel rate_model_from_string(const std::string& s) {
    if (s == "linear") return RateModel::linear;
    if (s == "lorentzian") return RateModel::lorentzian;
    throw std::invalid_argument("unknown rate_model: " + s);
}

AcquisitionMode acquisition_mode_from_string(const std::string& s) {
    if (s == "tac_first_photon") return AcquisitionMode::tac_first_photon;
    if (s == "mcs_multi_photon") return AcquisitionMode::mcs_multi_photon;
    throw std::invalid_argument("unknown acquisition_mode: " + s);
}

}  // namespace ionsense::photon
