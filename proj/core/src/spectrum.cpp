#include "ionsense/spectrum.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace ionsense::analysis {

SpectrumResult power_spectrum(const ArrivalHistogram& hist, double exclude_before,
                              double band_lo_hz, double band_hi_hz) {
    if (!(band_hi_hz > band_lo_hz) || !(band_lo_hz >= 0.0))
        throw std::invalid_argument("power_spectrum: invalid search band");

    std::size_t start = 0;
    while (start < hist.size() && hist.bin_center(start) < exclude_before) ++start;
    const std::size_t n = hist.size() - start;
    if (n < 16) throw std::invalid_argument("power_spectrum: fewer than 16 usable bins");

    std::vector<double> y(n);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = static_cast<double>(hist.counts[start + i]);
        mean += y[i];
    }
    mean /= static_cast<double>(n);
    for (auto& v : y) v -= mean;

    const double dt = hist.bin_width();
    const double df = 1.0 / (static_cast<double>(n) * dt);
    const std::size_t n_freq = n / 2;

    SpectrumResult result;
    result.frequencies.resize(n_freq);
    result.power.resize(n_freq);
    const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t k = 1; k <= n_freq; ++k) {
        std::complex<double> acc{0.0, 0.0};
        const double wk = step * static_cast<double>(k);
        for (std::size_t j = 0; j < n; ++j) {
            const double angle = wk * static_cast<double>(j);
            acc += y[j] * std::complex<double>(std::cos(angle), std::sin(angle));
        }
        result.frequencies[k - 1] = static_cast<double>(k) * df;
        result.power[k - 1] = std::norm(acc);
    }

    std::size_t peak = n_freq;  // sentinel
    for (std::size_t i = 0; i < n_freq; ++i) {
        const double f = result.frequencies[i];
        if (f < band_lo_hz || f > band_hi_hz) continue;
        if (peak == n_freq || result.power[i] > result.power[peak]) peak = i;
    }
    if (peak == n_freq) throw std::invalid_argument("power_spectrum: search band is empty");

    double noise_sum = 0.0;
    std::size_t noise_n = 0;
    for (std::size_t i = 0; i < n_freq; ++i) {
        const double f = result.frequencies[i];
        if (f < band_lo_hz || f > band_hi_hz) continue;
        if (i + 1 >= peak && i <= peak + 1) continue;  // peak bin and its two neighbours
        noise_sum += result.power[i];
        ++noise_n;
    }
    if (noise_n < 3)
        throw std::invalid_argument("power_spectrum: band leaves fewer than 3 noise bins");

    result.peak_index = peak;
    result.peak_frequency = result.frequencies[peak];
    result.noise_power_mean = noise_sum / static_cast<double>(noise_n);
    result.noise_bin_count = noise_n;
    result.snr =
        result.noise_power_mean > 0.0 ? std::sqrt(result.power[peak] / result.noise_power_mean) : 0.0;
    return result;
}

}  // namespace ionsense::analysis
