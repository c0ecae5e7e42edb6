#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ionsense/detection.hpp"
#include "ionsense/trajectory.hpp"

namespace ionsense::photon {

/// Draws one cycle of photon arrivals from the inhomogeneous Poisson process
/// with rate scatter_rate(v(t)) by thinning against rate_upper_bound.
/// Events live in [hardware_delay, detect_window]; TAC mode keeps only the
/// earliest. Deterministic for a fixed seed: draws come from the `photons`
/// stream of the seed, so a cycle seed can be shared with the thermal draw.
CycleTrace generate_cycle(const physics::ComTrajectory& trajectory, const DetectionConfig& cfg,
                          std::uint64_t seed, std::int64_t cycle_index = 0);

/// Runs n_cycles independent excitation/detection cycles. Cycle c uses seed
/// base_seed XOR c for both its thermal draw and its photon stream; the
/// start-pulse time origin is phase-locked to the drive, so the driven
/// modulation adds coherently across cycles while the thermal motion does
/// not. Cycles may be evaluated on several worker threads; output is ordered
/// by cycle_index and bit-identical for any worker count.
std::vector<CycleTrace> run_experiment(const physics::TrapConfig& trap,
                                       const physics::DriveConfig& drive,
                                       const DetectionConfig& cfg, std::int64_t n_cycles,
                                       std::uint64_t base_seed, int workers = 1);

/// Event-stream dump, one row per event: cycle_index,arrival_time_s.
/// Times are written with 15 significant digits and round-trip at that
/// precision.
void write_events_csv(std::span<const CycleTrace> traces, std::ostream& out);
void write_events_csv(std::span<const CycleTrace> traces, const std::string& path);

/// Reads a dump produced by write_events_csv. Cycles absent from the file
/// (no events) come back as empty traces up to n_cycles when given.
std::vector<CycleTrace> read_events_csv(std::istream& in, std::int64_t n_cycles = -1);

}  // namespace ionsense::photon
