#include "ionsense/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ionsense::analysis {

std::uint64_t ArrivalHistogram::total_counts() const {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

ArrivalHistogram build_histogram(std::span<const photon::CycleTrace> traces, double bin_width,
                                 double window, photon::AcquisitionMode mode) {
    if (traces.empty()) throw std::invalid_argument("build_histogram: empty trace list");
    if (!(bin_width > 0.0)) throw std::invalid_argument("build_histogram: bin_width must be > 0");
    if (!(window > 0.0)) throw std::invalid_argument("build_histogram: window must be > 0");

    const auto n_bins = static_cast<std::size_t>(std::ceil(window / bin_width - 1e-9));
    ArrivalHistogram hist;
    hist.n_cycles = static_cast<std::int64_t>(traces.size());
    hist.acquisition_mode = mode;
    hist.counts.assign(std::max<std::size_t>(n_bins, 1), 0);
    hist.bin_edges.resize(hist.counts.size() + 1);
    for (std::size_t i = 0; i < hist.bin_edges.size(); ++i)
        hist.bin_edges[i] = static_cast<double>(i) * bin_width;

    for (const auto& trace : traces) {
        for (double t : trace.arrival_times) {
            if (t < 0.0 || t > window)
                throw std::invalid_argument("build_histogram: event outside [0, window]");
            auto idx = static_cast<std::size_t>(t / bin_width);
            idx = std::min(idx, hist.counts.size() - 1);
            ++hist.counts[idx];
        }
    }

    if (mode == photon::AcquisitionMode::tac_first_photon &&
        hist.total_counts() > static_cast<std::uint64_t>(hist.n_cycles))
        throw std::logic_error("build_histogram: TAC histogram with more counts than cycles");
    return hist;
}

ArrivalHistogram build_histogram(std::span<const photon::CycleTrace> traces, double bin_width) {
    double latest = 0.0;
    for (const auto& trace : traces)
        if (!trace.arrival_times.empty()) latest = std::max(latest, trace.arrival_times.back());
    const double window = std::max(bin_width, std::ceil(latest / bin_width) * bin_width);
    return build_histogram(traces, bin_width, window);
}

}  // namespace ionsense::analysis
