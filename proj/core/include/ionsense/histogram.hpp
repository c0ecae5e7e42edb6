#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ionsense/detection.hpp"

namespace ionsense::analysis {

/// Photon arrival-time histogram accumulated over all cycles.
struct ArrivalHistogram {
    std::vector<double> bin_edges;          // size() + 1 entries, uniform
    std::vector<std::uint64_t> counts;
    std::int64_t n_cycles = 0;
    photon::AcquisitionMode acquisition_mode = photon::AcquisitionMode::mcs_multi_photon;

    std::size_t size() const { return counts.size(); }
    double bin_width() const { return bin_edges.size() > 1 ? bin_edges[1] - bin_edges[0] : 0.0; }
    double bin_center(std::size_t i) const { return 0.5 * (bin_edges[i] + bin_edges[i + 1]); }
    std::uint64_t total_counts() const;
};

/// Bins every event of every trace onto [0, window] with the given bin
/// width; events at the right edge land in the last bin. Throws on an empty
/// trace list.
ArrivalHistogram build_histogram(
    std::span<const photon::CycleTrace> traces, double bin_width, double window,
    photon::AcquisitionMode mode = photon::AcquisitionMode::mcs_multi_photon);

/// Same, with the window inferred from the latest event (rounded up to a
/// whole bin).
ArrivalHistogram build_histogram(std::span<const photon::CycleTrace> traces, double bin_width);

}  // namespace ionsense::analysis
