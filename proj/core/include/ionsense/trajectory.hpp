#pragma once

#include <cstdint>
#include <limits>

#include "ionsense/oscillator.hpp"

namespace ionsense::physics {

/// COM velocity during the detection window. t = 0 at detection-laser
/// turn-on, which coincides with the gated start pulse; the drive-coherent
/// component carries the phase of steady_state_response and decays with the
/// radiation-damping constant, while the thermal component is an undamped
/// sinusoid with per-cycle random phase and Boltzmann-distributed energy.
struct ComTrajectory {
    double driven_amplitude = 0.0;  // m/s
    double driven_phase = 0.0;      // rad at t = 0
    double omega = 0.0;             // rad/s
    double damping_time = std::numeric_limits<double>::infinity();  // s
    double thermal_amplitude = 0.0; // m/s
    double thermal_phase = 0.0;     // rad
    double window = 0.0;            // s

    double velocity(double t) const;

    /// Upper bound on |velocity| over the window.
    double max_speed() const { return driven_amplitude + thermal_amplitude; }
};

/// Builds the detection-window trajectory for one experiment cycle.
/// damping_time may be infinite (no damping). The thermal draw consumes the
/// `thermal` stream of thermal_seed: energy ~ Exp(kB T), phase ~ U(0, 2pi).
ComTrajectory com_trajectory(const TrapConfig& trap, const DriveConfig& drive,
                             double detect_window, double damping_time,
                             std::uint64_t thermal_seed);

}  // namespace ionsense::physics
