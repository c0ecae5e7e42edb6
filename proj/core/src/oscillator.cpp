#include "ionsense/oscillator.hpp"

#include <cmath>
#include <stdexcept>

namespace ionsense::physics {

void TrapConfig::validate() const {
    if (!(ion_mass > 0.0)) throw std::invalid_argument("trap: ion_mass must be > 0");
    if (ion_count < 1) throw std::invalid_argument("trap: ion_count must be >= 1");
    if (!(omega_z > 0.0)) throw std::invalid_argument("trap: omega_z must be > 0");
    if (!(temperature >= 0.0)) throw std::invalid_argument("trap: temperature must be >= 0");
    if (!(charge > 0.0)) throw std::invalid_argument("trap: charge must be > 0");
    if (!(omega_z_drift_step >= 0.0))
        throw std::invalid_argument("trap: omega_z_drift_step must be >= 0");
}

void DriveConfig::validate() const {
    if (!(force_per_ion >= 0.0)) throw std::invalid_argument("drive: force_per_ion must be >= 0");
    if (!(omega_d > 0.0)) throw std::invalid_argument("drive: omega_d must be > 0");
    if (!(drive_duration > 0.0)) throw std::invalid_argument("drive: drive_duration must be > 0");
    const double period = two_pi / omega_d;
    if (drive_duration < 10.0 * period)
        throw std::invalid_argument("drive: drive_duration must cover at least 10 drive periods");
}

double fold_phase(double phi) {
    double folded = std::remainder(phi, two_pi);  // [-pi, pi]
    if (folded <= -std::numbers::pi) folded += two_pi;
    return folded;
}

OscillationState steady_state_response(const TrapConfig& trap, const DriveConfig& drive) {
    trap.validate();
    drive.validate();
    const double wz = trap.omega_z;
    const double wd = drive.omega_d;
    if (std::abs(wz - wd) / wz >= 0.1)
        throw std::invalid_argument("steady_state_response: |omega_d - omega_z|/omega_z must be < 0.1");

    const double td = drive.drive_duration;
    const double n = static_cast<double>(trap.ion_count);
    const double total_force = n * drive.force_per_ion;
    const double total_mass = n * trap.ion_mass;
    const double detuning = wz - wd;

    double v;
    if (std::abs(detuning) * td < 1e-6) {
        // Resonant limit of the closed form; avoids 0/0.
        v = total_force * td / (2.0 * total_mass);
    } else {
        v = 2.0 * total_force * wd / (total_mass * (wz * wz - wd * wd)) *
            std::sin(0.5 * detuning * td);
    }

    double phase = 0.5 * (wd - wz) * td;
    if (v < 0.0) {
        v = -v;
        phase += std::numbers::pi;
    }

    OscillationState state;
    state.velocity_amplitude = v;
    state.phase = fold_phase(phase);
    state.displacement_amplitude = v / wz;
    return state;
}

double com_displacement(const TrapConfig& trap, double total_force, double drive_duration) {
    trap.validate();
    if (!(total_force >= 0.0))
        throw std::invalid_argument("com_displacement: total_force must be >= 0");
    if (!(drive_duration > 0.0))
        throw std::invalid_argument("com_displacement: drive_duration must be > 0");
    const double n = static_cast<double>(trap.ion_count);
    return total_force * drive_duration / (2.0 * n * trap.ion_mass * trap.omega_z);
}

double thermal_extent(const TrapConfig& trap, ThermalMode mode) {
    trap.validate();
    const double n = static_cast<double>(trap.ion_count);
    const double mode_mass = (mode == ThermalMode::com) ? n * trap.ion_mass : trap.ion_mass;
    return std::sqrt(k_boltzmann * trap.temperature /
                     (mode_mass * trap.omega_z * trap.omega_z));
}

}  // namespace ionsense::physics
