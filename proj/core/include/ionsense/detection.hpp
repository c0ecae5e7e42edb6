#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ionsense/constants.hpp"

namespace ionsense::photon {

/// Doppler-velocimetry rate law relating COM velocity to the detected
/// scatter rate.
enum class RateModel {
    linear,      // base_rate * [1 + (2/gamma) k v], clamped at 0
    lorentzian   // base_rate * L(detuning + k v) / L(detuning)
};

enum class AcquisitionMode {
    tac_first_photon,  // keep only the first photon per cycle
    mcs_multi_photon   // keep every photon per cycle
};

/// Detection-side hardware and atomic parameters, SI throughout.
struct DetectionConfig {
    double gamma = physics::be9_linewidth;          // rad/s, atomic linewidth
    double wavevector = physics::be9_wavevector;    // rad/m, along the motion
    double detuning = -0.5 * physics::be9_linewidth;  // rad/s, laser - atom
    double base_rate = 4.0e4;       // photons/s detected at zero velocity (n rho)
    double hardware_delay = 4.0e-6; // s, AOM + electronics; gates detection
    double detect_window = 100.0e-6;  // s, per-cycle acquisition span
    double damping_time = 25.0e-6;  // s, radiation damping of the driven motion
                                    // during detection; free parameter, not a
                                    // measured constant
    RateModel rate_model = RateModel::linear;
    AcquisitionMode acquisition_mode = AcquisitionMode::mcs_multi_photon;
    double bin_width = 50.0e-9;     // s, histogram bin

    void validate() const;
};

/// Photon arrivals of one experiment cycle, seconds relative to the gated
/// start pulse. Strictly increasing, all within [hardware_delay,
/// detect_window].
struct CycleTrace {
    std::int64_t cycle_index = 0;
    std::vector<double> arrival_times;
    std::uint64_t rng_seed = 0;
};

/// Detected scatter rate for a COM velocity. The linear model is the
/// first-order Doppler expansion; the Lorentzian model sweeps the resonance
/// profile L(d) = (gamma/2)^2 / (d^2 + (gamma/2)^2) with effective detuning
/// detuning + k v, and reduces to the linear model to first order in
/// k v / gamma at detuning -gamma/2.
double scatter_rate(double velocity, const DetectionConfig& cfg);

/// Least upper bound on scatter_rate over |velocity| <= max_speed; the
/// thinning envelope of the event sampler.
double rate_upper_bound(double max_speed, const DetectionConfig& cfg);

std::string to_string(RateModel m);
std::string to_string(AcquisitionMode m);
RateModel rate_model_from_string(const std::string& s);
AcquisitionMode acquisition_mode_from_string(const std::string& s);

}  // namespace ionsense::photon
