#include "ionsense/photon_engine.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ionsense/numfmt.hpp"
#include "ionsense/parallel.hpp"
#include "ionsense/rng.hpp"

namespace ionsense::photon {

CycleTrace generate_cycle(const physics::ComTrajectory& trajectory, const DetectionConfig& cfg,
                          std::uint64_t seed, std::int64_t cycle_index) {
    cfg.validate();
    if (trajectory.window < cfg.detect_window)
        throw std::invalid_argument("generate_cycle: trajectory shorter than detect_window");

    CycleTrace trace;
    trace.cycle_index = cycle_index;
    trace.rng_seed = seed;
    if (cfg.base_rate == 0.0) return trace;

    const double bound = rate_upper_bound(trajectory.max_speed(), cfg);
    if (bound <= 0.0) return trace;

    auto rng = util::make_engine(seed, util::Stream::photons);
    const bool first_only = cfg.acquisition_mode == AcquisitionMode::tac_first_photon;

    double t = cfg.hardware_delay;
    while (true) {
        t += util::exponential(rng, bound);
        if (t > cfg.detect_window) break;
        const double rate = scatter_rate(trajectory.velocity(t), cfg);
        if (rate > bound * (1.0 + 1e-9))
            throw std::logic_error("generate_cycle: thinning bound violated");
        if (util::uniform01(rng) * bound < rate) {
            trace.arrival_times.push_back(t);
            if (first_only) break;
        }
    }
    return trace;
}

std::vector<CycleTrace> run_experiment(const physics::TrapConfig& trap,
                                       const physics::DriveConfig& drive,
                                       const DetectionConfig& cfg, std::int64_t n_cycles,
                                       std::uint64_t base_seed, int workers) {
    if (n_cycles < 1) throw std::invalid_argument("run_experiment: n_cycles must be >= 1");
    trap.validate();
    drive.validate();
    cfg.validate();
    // Surface response-model precondition violations before any compute.
    (void)physics::steady_state_response(trap, drive);

    // Trap-frequency drift is a random walk, inherently sequential; its
    // per-cycle offsets are precomputed from a dedicated stream so cycle
    // evaluation stays order-free.
    std::vector<double> drift;
    if (trap.omega_z_drift_step > 0.0) {
        drift.resize(static_cast<std::size_t>(n_cycles));
        auto rng = util::make_engine(base_seed, util::Stream::drift);
        double offset = 0.0;
        for (auto& d : drift) {
            offset += trap.omega_z_drift_step * util::normal(rng);
            d = offset;
        }
    }

    std::vector<CycleTrace> traces(static_cast<std::size_t>(n_cycles));
    util::parallel_for(n_cycles, workers, [&](std::int64_t c) {
        const std::uint64_t seed = base_seed ^ static_cast<std::uint64_t>(c);
        physics::TrapConfig cycle_trap = trap;
        if (!drift.empty()) cycle_trap.omega_z += drift[static_cast<std::size_t>(c)];
        const auto trajectory = physics::com_trajectory(
            cycle_trap, drive, cfg.detect_window, cfg.damping_time, seed);
        traces[static_cast<std::size_t>(c)] = generate_cycle(trajectory, cfg, seed, c);
    });
    return traces;
}

void write_events_csv(std::span<const CycleTrace> traces, std::ostream& out) {
    out << "cycle_index,arrival_time_s\n";
    for (const auto& trace : traces)
        for (double t : trace.arrival_times)
            out << trace.cycle_index << ',' << util::format_g15(t) << '\n';
}

void write_events_csv(std::span<const CycleTrace> traces, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_events_csv(traces, out);
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<CycleTrace> read_events_csv(std::istream& in, std::int64_t n_cycles) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("cycle_index,", 0) != 0)
        throw std::runtime_error("events csv: missing header");
    std::vector<CycleTrace> traces;
    if (n_cycles > 0) {
        traces.resize(static_cast<std::size_t>(n_cycles));
        for (std::int64_t i = 0; i < n_cycles; ++i) traces[static_cast<std::size_t>(i)].cycle_index = i;
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("events csv: malformed row: " + line);
        const std::int64_t cycle = std::strtoll(line.c_str(), nullptr, 10);
        const double t = std::strtod(line.c_str() + comma + 1, nullptr);
        if (cycle < 0) throw std::runtime_error("events csv: negative cycle index");
        if (static_cast<std::size_t>(cycle) >= traces.size()) {
            const std::size_t old = traces.size();
            traces.resize(static_cast<std::size_t>(cycle) + 1);
            for (std::size_t i = old; i < traces.size(); ++i)
                traces[i].cycle_index = static_cast<std::int64_t>(i);
        }
        traces[static_cast<std::size_t>(cycle)].arrival_times.push_back(t);
    }
    return traces;
}

}  // namespace ionsense::photon
