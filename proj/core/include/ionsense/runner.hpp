#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ionsense/experiment_spec.hpp"
#include "ionsense/sensitivity.hpp"
#include "ionsense/sweep.hpp"

namespace ionsense::runner {

enum class OutputFormat { csv, json };

OutputFormat output_format_from_string(const std::string& s);

/// Execution knobs shared by every command.
struct RunContext {
    std::string out_dir;
    OutputFormat format = OutputFormat::csv;
    int workers = 1;
};

/// Inventory entry of a produced file.
struct OutputFile {
    std::string path;    // relative to out_dir
    std::string sha256;
    std::uint64_t bytes = 0;
};

struct StageTime {
    std::string name;
    double wall_seconds = 0.0;
};

/// Reproducibility record written next to every command's outputs. The spec
/// hash and file checksums are deterministic for a given spec and seed; the
/// timestamps and stage timings are not and are excluded from
/// reproducibility comparisons.
struct RunManifest {
    int schema_version = 1;
    std::string command;
    std::string spec_sha256;
    std::string tool_version;
    std::string created_utc;
    std::vector<StageTime> stages;
    std::vector<OutputFile> outputs;
};

void write_manifest(const RunManifest& manifest, const std::string& out_dir);
RunManifest read_manifest(const std::string& path);

/// Simulated wall-clock cost of the whole acquisition: n_cycles *
/// (cooling dead time + drive duration + detection window). Reports never
/// use host wall-clock.
double measurement_time(const ExperimentSpec& spec, double drive_duration);

struct SimulateResult {
    RunManifest manifest;
    std::uint64_t total_events = 0;
};

/// Runs the excitation/detection cycles of spec.drive, persists the event
/// stream, the arrival histogram and (for TAC data with any counts) the
/// exponential-background fit and residuals.
SimulateResult cmd_simulate(const ExperimentSpec& spec, const RunContext& ctx);

struct SweepFrequencyResult {
    RunManifest manifest;
    analysis::FrequencySweepResult sweep;
};

/// Drive-frequency scan: residual map, amplitude-proxy curve and the
/// closed-form response overlay.
SweepFrequencyResult cmd_sweep_frequency(const ExperimentSpec& spec, const RunContext& ctx);

struct SweepForceResult {
    RunManifest manifest;
    std::vector<analysis::SensitivityReport> reports;  // one per ladder rung
};

/// Force ladder: per rung a time trace (histogram), a spectrum and a
/// sensitivity report.
SweepForceResult cmd_sweep_force(const ExperimentSpec& spec, const RunContext& ctx);

struct BudgetResult {
    RunManifest manifest;
    std::vector<analysis::BudgetRow> rows;
};

/// Analytic shot-noise projection table for spec.budget_scenarios.
BudgetResult cmd_sensitivity_budget(const ExperimentSpec& spec, const RunContext& ctx);

}  // namespace ionsense::runner
