#pragma once

#include <cstdint>
#include <string>

#include "ionsense/detection.hpp"
#include "ionsense/oscillator.hpp"
#include "ionsense/spectrum.hpp"

namespace ionsense::analysis {

/// Relative (1-sigma) input uncertainties carried into the report.
struct UncertaintyInputs {
    double force_rel = 0.0;      // applied-force calibration
    double ion_count_rel = 0.0;  // crystal size
};

/// Bandwidth-normalised detection figures for one measurement.
struct SensitivityReport {
    double total_force = 0.0;        // N, drive amplitude on the whole crystal
    double snr = 0.0;                // amplitude SNR of the spectral peak
    double measurement_time = 0.0;   // s, tau_M including dead time
    double bandwidth = 0.0;          // Hz, 1 / tau_M
    double force_sensitivity = 0.0;  // N/sqrt(Hz), total_force/snr * sqrt(tau_M)
    double displacement = 0.0;       // m, on-resonance COM amplitude
    double displacement_sensitivity = 0.0;  // m/sqrt(Hz)

    double total_force_sigma = 0.0;
    double snr_sigma = 0.0;
    double force_sensitivity_sigma = 0.0;
    double displacement_sigma = 0.0;
    double displacement_sensitivity_sigma = 0.0;
};

/// Folds a measured spectrum into force and displacement sensitivities.
/// The SNR statistical uncertainty is estimated from the spectrum's noise
/// bins; input uncertainties propagate to first order.
SensitivityReport sensitivity_report(const SpectrumResult& spectrum, double total_force,
                                     double tau_m, const physics::TrapConfig& trap,
                                     const physics::DriveConfig& drive,
                                     const UncertaintyInputs& uncertainties = {});

/// One row of the analytic (no Monte Carlo) shot-noise projection.
struct BudgetScenario {
    std::string name;
    std::int64_t ion_count = 1;
    double drive_duration = 0.0;     // s
    double collection_gain = 1.0;    // multiplier on the detected photon rate
    bool zero_dead_time = false;     // drop the per-cycle cooling dead time
};

struct BudgetRow {
    std::string name;
    std::int64_t ion_count = 0;
    double drive_duration = 0.0;
    double detected_rate = 0.0;            // photons/s after collection gain
    double cycle_time = 0.0;               // s
    double force_sensitivity = 0.0;        // N/sqrt(Hz), SNR = 1
    double field_sensitivity = 0.0;        // (V/m)/sqrt(Hz)
    double displacement_sensitivity = 0.0; // m/sqrt(Hz)
};

/// Shot-noise-limited projection of the phase-coherent velocimetry chain.
/// The amplitude SNR of the spectral peak for N cycles at detected rate r is
///     SNR = (eps / 2) D attn sqrt(N r u),
/// with eps = (2k/gamma) v the peak modulation depth, u the gated detection
/// span, D the mean radiation-damping factor over that span and attn the
/// finite-bin attenuation. Solving for SNR = 1 and normalising by the
/// measurement bandwidth 1/tau_M cancels N and leaves
///     S_F = 2 gamma n m sqrt(c) / (k t_d D attn sqrt(r u)),
/// with c the wall-clock cost of one cycle. Zero detected rate reports an
/// unbounded (infinite) sensitivity.
BudgetRow sensitivity_budget_row(const physics::TrapConfig& trap,
                                 const photon::DetectionConfig& detection,
                                 double cooling_dead_time, const BudgetScenario& scenario);

}  // namespace ionsense::analysis
