#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ionsense/histogram.hpp"

namespace ionsense::analysis {

/// Result of the exponential background fit A exp(-t / tau).
struct ExponentialFit {
    double amplitude = 0.0;    // A, counts at t = 0
    double decay_time = 0.0;   // tau, s
    std::vector<double> residuals;  // counts - model, every input bin
    std::size_t fit_start_index = 0;  // first bin that entered the fit
};

/// Weighted nonlinear least squares of A exp(-t/tau) against the histogram
/// counts for bins at or after fit_start (pass the hardware delay). Weights
/// are 1/sqrt(max(count, 1)). For TAC data with a flat underlying rate r the
/// fitted tau converges to 1/r.
///
/// Throws when fewer than five usable bins remain, on an all-zero histogram,
/// or when the iteration fails to converge.
ExponentialFit fit_exponential_background(const ArrivalHistogram& hist, double fit_start = 0.0);

/// Oscillation-amplitude proxy: count-weighted standard deviation of the
/// arrival-time distribution over the whole histogram. A flat distribution
/// on [0, w] gives w / sqrt(12).
double amplitude_proxy(const ArrivalHistogram& hist);

/// Oscillation-amplitude proxy of a background-subtracted slice: the
/// standard deviation of the residual values across bins. A clean sinusoidal
/// residual of amplitude a gives a / sqrt(2); uncorrelated noise sets the
/// floor.
double amplitude_proxy(std::span<const double> residuals);

}  // namespace ionsense::analysis
