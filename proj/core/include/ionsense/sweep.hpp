#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ionsense/background_fit.hpp"
#include "ionsense/histogram.hpp"
#include "ionsense/oscillator.hpp"

namespace ionsense::analysis {

/// Drive-frequency response map. Rows follow the omegas vector; columns are
/// the analysis-window time bins.
struct FrequencySweepResult {
    std::vector<double> omegas;        // rad/s, sweep axis
    std::vector<double> bin_centers;   // s, time axis of the map columns
    std::vector<std::vector<double>> residual_map;  // background-subtracted counts
    std::vector<double> proxy;         // residual-slice std dev per omega
    std::vector<double> theory_velocity;  // m/s, closed-form |v|(omega_d)
    std::vector<double> theory_phase;     // rad, closed-form phase(omega_d)
};

/// Runs one experiment per drive frequency and reduces each to a
/// background-subtracted histogram slice plus the amplitude proxy.
/// TAC data subtracts the exponential background fit; MCS data subtracts the
/// mean (its underlying profile is flat). Point p derives its seed from
/// base_seed and p, so the sweep is reproducible and points are independent.
FrequencySweepResult frequency_sweep(const physics::TrapConfig& trap,
                                     const physics::DriveConfig& drive_template,
                                     const photon::DetectionConfig& cfg,
                                     std::span<const double> omegas, std::int64_t n_cycles,
                                     std::uint64_t base_seed, double exclude_before,
                                     int workers = 1);

/// Positions (Hz offset from f0) of local minima of the proxy curve within
/// |f - f0| in [search_lo, search_hi]; used to locate detuning nulls.
std::vector<double> proxy_null_offsets(const FrequencySweepResult& sweep, double f0_hz,
                                       double search_lo_hz, double search_hi_hz);

/// Full width at half maximum (Hz) of the coherent response estimated from
/// the proxy curve: the noise floor (smallest proxy point) is removed in
/// quadrature and the half-maximum crossings of the central lobe are found
/// by linear interpolation.
double proxy_fwhm_hz(const FrequencySweepResult& sweep);

}  // namespace ionsense::analysis
