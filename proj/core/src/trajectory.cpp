#include "ionsense/trajectory.hpp"

#include <cmath>
#include <stdexcept>

#include "ionsense/rng.hpp"

namespace ionsense::physics {

double ComTrajectory::velocity(double t) const {
    const double damp = std::isinf(damping_time) ? 1.0 : std::exp(-t / damping_time);
    return driven_amplitude * damp * std::sin(omega * t + driven_phase) +
           thermal_amplitude * std::sin(omega * t + thermal_phase);
}

ComTrajectory com_trajectory(const TrapConfig& trap, const DriveConfig& drive,
                             double detect_window, double damping_time,
                             std::uint64_t thermal_seed) {
    if (!(detect_window > 0.0))
        throw std::invalid_argument("com_trajectory: detect_window must be > 0");
    if (!(damping_time > 0.0))
        throw std::invalid_argument("com_trajectory: damping_time must be > 0 (may be inf)");

    const OscillationState driven = steady_state_response(trap, drive);

    ComTrajectory traj;
    traj.driven_amplitude = driven.velocity_amplitude;
    traj.driven_phase = driven.phase;
    traj.omega = trap.omega_z;
    traj.damping_time = damping_time;
    traj.window = detect_window;

    if (trap.temperature > 0.0) {
        auto rng = util::make_engine(thermal_seed, util::Stream::thermal);
        const double total_mass = static_cast<double>(trap.ion_count) * trap.ion_mass;
        const double energy = util::exponential(rng, 1.0 / (k_boltzmann * trap.temperature));
        traj.thermal_amplitude = std::sqrt(2.0 * energy / total_mass);
        traj.thermal_phase = util::uniform(rng, 0.0, two_pi);
    }
    return traj;
}

}  // namespace ionsense::physics
