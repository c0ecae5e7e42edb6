#include "ionsense/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ionsense/constants.hpp"
#include "ionsense/photon_engine.hpp"
#include "ionsense/rng.hpp"

namespace ionsense::analysis {

FrequencySweepResult frequency_sweep(const physics::TrapConfig& trap,
                                     const physics::DriveConfig& drive_template,
                                     const photon::DetectionConfig& cfg,
                                     std::span<const double> omegas, std::int64_t n_cycles,
                                     std::uint64_t base_seed, double exclude_before,
                                     int workers) {
    if (omegas.empty()) throw std::invalid_argument("frequency_sweep: empty frequency grid");
    if (!std::is_sorted(omegas.begin(), omegas.end()))
        throw std::invalid_argument("frequency_sweep: frequency grid must be sorted");
    for (double w : omegas)
        if (std::abs(w - trap.omega_z) / trap.omega_z >= 0.1)
            throw std::invalid_argument("frequency_sweep: grid point outside the response-model window");

    FrequencySweepResult result;
    result.omegas.assign(omegas.begin(), omegas.end());
    result.residual_map.resize(omegas.size());
    result.proxy.resize(omegas.size());
    result.theory_velocity.resize(omegas.size());
    result.theory_phase.resize(omegas.size());

    for (std::size_t p = 0; p < omegas.size(); ++p) {
        physics::DriveConfig drive = drive_template;
        drive.omega_d = omegas[p];

        const auto theory = physics::steady_state_response(trap, drive);
        result.theory_velocity[p] = theory.velocity_amplitude;
        result.theory_phase[p] = theory.phase;

        const std::uint64_t point_seed =
            util::splitmix64(base_seed ^ (static_cast<std::uint64_t>(util::Stream::sweep) + p));
        const auto traces =
            photon::run_experiment(trap, drive, cfg, n_cycles, point_seed, workers);
        const auto hist = build_histogram(traces, cfg.bin_width, cfg.detect_window,
                                          cfg.acquisition_mode);

        std::size_t start = 0;
        while (start < hist.size() && hist.bin_center(start) < exclude_before) ++start;
        if (hist.size() - start < 2)
            throw std::invalid_argument("frequency_sweep: analysis window has fewer than 2 bins");

        std::vector<double> slice;
        slice.reserve(hist.size() - start);
        if (cfg.acquisition_mode == photon::AcquisitionMode::tac_first_photon &&
            hist.total_counts() > 0) {
            const auto fit = fit_exponential_background(hist, exclude_before);
            slice.assign(fit.residuals.begin() + static_cast<std::ptrdiff_t>(start),
                         fit.residuals.end());
        } else {
            double mean = 0.0;
            for (std::size_t i = start; i < hist.size(); ++i)
                mean += static_cast<double>(hist.counts[i]);
            mean /= static_cast<double>(hist.size() - start);
            for (std::size_t i = start; i < hist.size(); ++i)
                slice.push_back(static_cast<double>(hist.counts[i]) - mean);
        }
        result.proxy[p] = amplitude_proxy(std::span<const double>(slice));
        result.residual_map[p] = std::move(slice);

        if (result.bin_centers.empty()) {
            result.bin_centers.reserve(hist.size() - start);
            for (std::size_t i = start; i < hist.size(); ++i)
                result.bin_centers.push_back(hist.bin_center(i));
        }
    }
    return result;
}

std::vector<double> proxy_null_offsets(const FrequencySweepResult& sweep, double f0_hz,
                                       double search_lo_hz, double search_hi_hz) {
    std::vector<double> nulls;
    for (int side : {-1, 1}) {
        double best_offset = 0.0;
        double best_value = 0.0;
        bool found = false;
        for (std::size_t i = 0; i < sweep.omegas.size(); ++i) {
            const double offset = side * (sweep.omegas[i] / physics::two_pi - f0_hz);
            if (offset < search_lo_hz || offset > search_hi_hz) continue;
            if (!found || sweep.proxy[i] < best_value) {
                best_value = sweep.proxy[i];
                best_offset = offset;
                found = true;
            }
        }
        if (found) nulls.push_back(side * best_offset);
    }
    std::sort(nulls.begin(), nulls.end());
    return nulls;
}

double proxy_fwhm_hz(const FrequencySweepResult& sweep) {
    const std::size_t n = sweep.proxy.size();
    if (n < 5) throw std::invalid_argument("proxy_fwhm_hz: too few sweep points");

    // Coherent response with the noise floor removed in quadrature.
    double floor2 = sweep.proxy[0] * sweep.proxy[0];
    for (double p : sweep.proxy) floor2 = std::min(floor2, p * p);
    std::vector<double> response(n);
    for (std::size_t i = 0; i < n; ++i)
        response[i] = std::sqrt(std::max(0.0, sweep.proxy[i] * sweep.proxy[i] - floor2));

    const std::size_t peak = static_cast<std::size_t>(
        std::max_element(response.begin(), response.end()) - response.begin());
    const double half = 0.5 * response[peak];
    if (!(half > 0.0)) throw std::invalid_argument("proxy_fwhm_hz: flat response");

    const auto freq = [&](std::size_t i) { return sweep.omegas[i] / physics::two_pi; };

    double left = freq(0);
    for (std::size_t i = peak; i-- > 0;) {
        if (response[i] <= half) {
            const double t = (half - response[i]) / (response[i + 1] - response[i]);
            left = freq(i) + t * (freq(i + 1) - freq(i));
            break;
        }
    }
    double right = freq(n - 1);
    for (std::size_t i = peak + 1; i < n; ++i) {
        if (response[i] <= half) {
            const double t = (response[i - 1] - half) / (response[i - 1] - response[i]);
            right = freq(i - 1) + t * (freq(i) - freq(i - 1));
            break;
        }
    }
    return right - left;
}

}  // namespace ionsense::analysis
