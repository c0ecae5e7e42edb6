#pragma once

#include <cstddef>
#include <vector>

#include "ionsense/histogram.hpp"

namespace ionsense::analysis {

/// One-sided power spectrum of the mean-subtracted histogram counts.
struct SpectrumResult {
    std::vector<double> frequencies;  // Hz, k / (n dt), k = 1..n/2
    std::vector<double> power;        // |X_k|^2, arbitrary units
    double peak_frequency = 0.0;      // Hz, argmax within the search band
    double snr = 0.0;                 // amplitude SNR, see below
    std::size_t peak_index = 0;       // into frequencies/power
    double noise_power_mean = 0.0;    // mean power of the in-band noise bins
    std::size_t noise_bin_count = 0;
};

/// DFT (rectangular window, no zero padding) of the counts in bins at or
/// after exclude_before, after mean subtraction. The peak is the largest
/// power bin inside [band_lo_hz, band_hi_hz]; the noise reference is the
/// mean power of the remaining band bins excluding the peak's two
/// neighbours, and
///     snr = sqrt(peak_power / noise_power_mean),
/// an amplitude-style ratio: it grows linearly with the modulation depth and
/// as sqrt(n_cycles), and equals the noise baseline (~sqrt of the expected
/// maximum of the band's noise bins, about 1.5-2) for pure noise.
///
/// Requires at least 16 usable bins and at least 3 noise bins in the band.
SpectrumResult power_spectrum(const ArrivalHistogram& hist, double exclude_before,
                              double band_lo_hz, double band_hi_hz);

}  // namespace ionsense::analysis
