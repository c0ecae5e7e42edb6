#include "ionsense/sensitivity.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ionsense::analysis {

SensitivityReport sensitivity_report(const SpectrumResult& spectrum, double total_force,
                                     double tau_m, const physics::TrapConfig& trap,
                                     const physics::DriveConfig& drive,
                                     const UncertaintyInputs& uncertainties) {
    if (!(spectrum.snr > 0.0)) throw std::invalid_argument("sensitivity_report: snr must be > 0");
    if (!(tau_m > 0.0)) throw std::invalid_argument("sensitivity_report: tau_m must be > 0");
    if (!(total_force >= 0.0))
        throw std::invalid_argument("sensitivity_report: total_force must be >= 0");
    trap.validate();

    SensitivityReport report;
    report.total_force = total_force;
    report.snr = spectrum.snr;
    report.measurement_time = tau_m;
    report.bandwidth = 1.0 / tau_m;
    report.force_sensitivity = total_force / spectrum.snr * std::sqrt(tau_m);
    report.displacement = physics::com_displacement(trap, total_force, drive.drive_duration);
    report.displacement_sensitivity = report.displacement / spectrum.snr * std::sqrt(tau_m);

    // Statistical spread of the amplitude SNR: peak power fluctuates as a
    // noncentral exponential, the noise mean as 1/sqrt(K).
    const double s2 = spectrum.snr * spectrum.snr;
    const double k_bins = static_cast<double>(std::max<std::size_t>(spectrum.noise_bin_count, 1));
    const double rel_var_peak = (1.0 + 2.0 * s2) / ((1.0 + s2) * (1.0 + s2));
    const double rel_var_snr = 0.25 * (rel_var_peak + 1.0 / k_bins);
    const double snr_rel = std::sqrt(rel_var_snr);

    const double force_rel = uncertainties.force_rel;
    const double n_rel = uncertainties.ion_count_rel;

    report.snr_sigma = report.snr * snr_rel;
    report.total_force_sigma = total_force * force_rel;
    report.force_sensitivity_sigma =
        report.force_sensitivity * std::sqrt(force_rel * force_rel + snr_rel * snr_rel);
    report.displacement_sigma =
        report.displacement * std::sqrt(force_rel * force_rel + n_rel * n_rel);
    report.displacement_sensitivity_sigma =
        report.displacement_sensitivity *
        std::sqrt(force_rel * force_rel + n_rel * n_rel + snr_rel * snr_rel);
    return report;
}

BudgetRow sensitivity_budget_row(const physics::TrapConfig& trap,
                                 const photon::DetectionConfig& detection,
                                 double cooling_dead_time, const BudgetScenario& scenario) {
    trap.validate();
    detection.validate();
    if (!(cooling_dead_time >= 0.0))
        throw std::invalid_argument("sensitivity_budget: cooling_dead_time must be >= 0");
    if (scenario.ion_count < 1)
        throw std::invalid_argument("sensitivity_budget: scenario ion_count must be >= 1");
    if (!(scenario.drive_duration > 0.0))
        throw std::invalid_argument("sensitivity_budget: scenario drive_duration must be > 0");
    if (!(scenario.collection_gain >= 0.0))
        throw std::invalid_argument("sensitivity_budget: collection_gain must be >= 0");

    const double n = static_cast<double>(scenario.ion_count);
    const double m = trap.ion_mass;
    const double gamma = detection.gamma;
    const double k = detection.wavevector;
    const double t_d = scenario.drive_duration;
    const double rate = scenario.collection_gain * detection.base_rate;
    const double window = detection.detect_window;
    const double delay = detection.hardware_delay;
    const double span = window - delay;
    const double tau = detection.damping_time;

    // Mean damping factor of the driven amplitude over the gated span; the
    // trajectory clock starts at the start pulse, so the delay eats into it.
    const double damping_mean =
        std::isinf(tau) ? 1.0 : tau / span * (std::exp(-delay / tau) - std::exp(-window / tau));
    const double x = 0.5 * trap.omega_z * detection.bin_width;
    const double bin_attenuation = x > 0.0 ? std::sin(x) / x : 1.0;

    BudgetRow row;
    row.name = scenario.name;
    row.ion_count = scenario.ion_count;
    row.drive_duration = t_d;
    row.detected_rate = rate;
    row.cycle_time = (scenario.zero_dead_time ? 0.0 : cooling_dead_time) + t_d + window;

    if (rate <= 0.0) {
        row.force_sensitivity = std::numeric_limits<double>::infinity();
        row.field_sensitivity = std::numeric_limits<double>::infinity();
        row.displacement_sensitivity = std::numeric_limits<double>::infinity();
        return row;
    }

    row.force_sensitivity = 2.0 * gamma * n * m * std::sqrt(row.cycle_time) /
                            (k * t_d * damping_mean * bin_attenuation * std::sqrt(rate * span));
    row.field_sensitivity = row.force_sensitivity / (n * trap.charge);
    row.displacement_sensitivity =
        row.force_sensitivity * t_d / (2.0 * n * m * trap.omega_z);
    return row;
}

}  // namespace ionsense::analysis
