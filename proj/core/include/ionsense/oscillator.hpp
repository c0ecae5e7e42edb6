#pragma once

#include <cstdint>

#include "ionsense/constants.hpp"

namespace ionsense::physics {

/// Harmonic confinement of the crystal's axial center-of-mass (COM) mode.
/// All quantities SI; omega_z is angular.
struct TrapConfig {
    double ion_mass = be9_ion_mass;      // kg, per ion
    std::int64_t ion_count = 1;          // n
    double omega_z = 0.0;                // rad/s, COM axial mode
    double temperature = 0.0;            // K, axial mode temperature
    double charge = elementary_charge;   // C, per ion

    /// Per-cycle Gaussian random-walk step applied to omega_z (rad/s).
    /// Models slow trap-frequency drift; zero disables it.
    double omega_z_drift_step = 0.0;

    void validate() const;
};

/// One oscillating drive pulse: F sin(omega_d t) per ion for drive_duration.
struct DriveConfig {
    double force_per_ion = 0.0;   // N, zero-to-peak
    double omega_d = 0.0;         // rad/s
    double drive_duration = 0.0;  // s

    /// The closed-form response assumes many drive periods; pulses shorter
    /// than 10 periods are rejected.
    void validate() const;
};

/// Post-drive steady-state COM oscillation, velocity form
/// zdot(t) = velocity_amplitude * sin(omega_z t + phase).
struct OscillationState {
    double velocity_amplitude = 0.0;      // m/s, >= 0
    double phase = 0.0;                   // rad, folded to (-pi, pi]
    double displacement_amplitude = 0.0;  // m, = velocity_amplitude / omega_z
};

/// Folds an angle to (-pi, pi].
double fold_phase(double phi);

/// Closed-form response of the driven, undamped COM oscillator started from
/// rest. The amplitude is
///   v = 2 F_tot omega_d / [n m (omega_z^2 - omega_d^2)]
///       * sin((omega_z - omega_d) t_d / 2)
/// with an explicit on-resonance branch v = F_tot t_d / (2 n m) when
/// |omega_z - omega_d| t_d < 1e-6, and phase (omega_d - omega_z) t_d / 2.
/// A negative closed-form amplitude is folded into the phase.
///
/// Requires |omega_d - omega_z| / omega_z < 0.1.
OscillationState steady_state_response(const TrapConfig& trap, const DriveConfig& drive);

/// On-resonance COM displacement amplitude z = F_tot t_d / (2 n m omega_z).
double com_displacement(const TrapConfig& trap, double total_force, double drive_duration);

enum class ThermalMode {
    com,        // rms axial extent of the COM coordinate
    single_ion  // rms axial extent of one ion, sqrt(n) times larger
};

/// Thermal rms axial extent: sqrt(kB T / (M omega_z^2)) with M = n m for the
/// COM mode and M = m for a single ion.
double thermal_extent(const TrapConfig& trap, ThermalMode mode);

}  // namespace ionsense::physics
