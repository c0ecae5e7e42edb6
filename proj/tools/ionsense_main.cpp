// Command-line surface of the ion-crystal force-sensing simulator.
//
// Subcommands: simulate, sweep-frequency, sweep-force, sensitivity-budget,
// calibrate. Exit codes: 0 success, 2 invalid spec, 3 runtime failure.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ionsense/calibration.hpp"
#include "ionsense/constants.hpp"
#include "ionsense/numfmt.hpp"
#include "ionsense/runner.hpp"
#include "ionsense/version.hpp"

namespace {

using ionsense::runner::ExperimentSpec;
using ionsense::runner::RunContext;
using ionsense::runner::SpecError;

struct CommonOptions {
    std::string spec_path;
    std::string out_dir = "out";
    std::string format = "csv";
    int workers = 1;
    std::optional<std::uint64_t> seed_override;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--spec", opts.spec_path, "Experiment spec file (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out-dir", opts.out_dir, "Output directory (created if missing)");
    cmd->add_option("--format", opts.format, "Table output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--workers", opts.workers, "Worker threads for cycle generation")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opts.seed_override, "Override the spec's base seed");
}

RunContext make_context(const CommonOptions& opts) {
    RunContext ctx;
    ctx.out_dir = opts.out_dir;
    ctx.format = ionsense::runner::output_format_from_string(opts.format);
    ctx.workers = opts.workers;
    return ctx;
}

ExperimentSpec load_spec(const CommonOptions& opts) {
    ExperimentSpec spec = ionsense::runner::load_experiment_spec(opts.spec_path);
    if (opts.seed_override) spec.run.base_seed = *opts.seed_override;
    return spec;
}

int run_calibrate(const CommonOptions& opts) {
    using nlohmann::json;
    std::ifstream in(opts.spec_path, std::ios::binary);
    if (!in) throw SpecError("spec: cannot open file: " + opts.spec_path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SpecError(std::string("spec: JSON parse error: ") + e.what());
    }
    for (const auto& item : doc.items()) {
        const auto& k = item.key();
        if (k != "applied_voltage_v" && k != "field_at_ions_v_per_m" &&
            k != "geometry_factor_per_m" && k != "charge_c")
            throw SpecError("spec: unknown key '" + k + "'");
    }
    ionsense::physics::FieldCalibrationInput input;
    auto grab = [&doc](const char* key) -> std::optional<double> {
        if (!doc.contains(key)) return std::nullopt;
        if (!doc.at(key).is_number()) throw SpecError(std::string("spec: ") + key + ": expected a number");
        return doc.at(key).get<double>();
    };
    input.applied_voltage = grab("applied_voltage_v");
    input.field_at_ions = grab("field_at_ions_v_per_m");
    input.geometry_factor = grab("geometry_factor_per_m");
    const double charge =
        grab("charge_c").value_or(ionsense::physics::elementary_charge);

    ionsense::physics::FieldCalibration cal;
    try {
        cal = ionsense::physics::calibrate_force(input, charge);
    } catch (const std::invalid_argument& e) {
        throw SpecError(std::string("spec: ") + e.what());
    }

    std::filesystem::create_directories(opts.out_dir);
    const auto path = std::filesystem::path(opts.out_dir) /
                      (opts.format == "csv" ? "calibration.csv" : "calibration.json");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    if (opts.format == "csv") {
        out << "applied_voltage_v,geometry_factor_per_m,field_at_ions_v_per_m,charge_c,"
               "force_per_ion_n\n";
        auto cell = [](const std::optional<double>& v) {
            return v ? ionsense::util::format_g15(*v) : std::string();
        };
        out << cell(cal.applied_voltage) << ',' << cell(cal.geometry_factor) << ','
            << ionsense::util::format_g15(cal.field_at_ions) << ','
            << ionsense::util::format_g15(charge) << ','
            << ionsense::util::format_g15(cal.force_per_ion) << '\n';
    } else {
        json result;
        result["schema_version"] = 1;
        if (cal.applied_voltage) result["applied_voltage_v"] = *cal.applied_voltage;
        if (cal.geometry_factor) result["geometry_factor_per_m"] = *cal.geometry_factor;
        result["field_at_ions_v_per_m"] = cal.field_at_ions;
        result["charge_c"] = charge;
        result["force_per_ion_n"] = cal.force_per_ion;
        out << result.dump(2) << '\n';
    }
    std::cout << "force_per_ion_n=" << ionsense::util::format_g15(cal.force_per_ion) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trapped-ion crystal force-sensing simulator"};
    app.set_version_flag("--version", ionsense::version);
    app.require_subcommand(1);

    CommonOptions opts;
    auto* simulate = app.add_subcommand(
        "simulate", "Run excitation/detection cycles; emit events and histogram");
    add_common(simulate, opts);
    auto* sweep_freq = app.add_subcommand(
        "sweep-frequency", "Scan the drive frequency; emit response map and proxy curve");
    add_common(sweep_freq, opts);
    auto* sweep_force = app.add_subcommand(
        "sweep-force", "Run a force ladder; emit traces, spectra and sensitivity reports");
    add_common(sweep_force, opts);
    auto* budget = app.add_subcommand(
        "sensitivity-budget", "Analytic shot-noise sensitivity projections");
    add_common(budget, opts);
    auto* calibrate = app.add_subcommand(
        "calibrate", "Complete a voltage/field/force calibration triple");
    add_common(calibrate, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            const auto result = ionsense::runner::cmd_simulate(load_spec(opts), make_context(opts));
            std::cout << "simulate: " << result.total_events << " events -> " << opts.out_dir
                      << '\n';
        } else if (sweep_freq->parsed()) {
            const auto result =
                ionsense::runner::cmd_sweep_frequency(load_spec(opts), make_context(opts));
            std::cout << "sweep-frequency: " << result.sweep.omegas.size() << " points -> "
                      << opts.out_dir << '\n';
        } else if (sweep_force->parsed()) {
            const auto result =
                ionsense::runner::cmd_sweep_force(load_spec(opts), make_context(opts));
            std::cout << "sweep-force: " << result.reports.size() << " rungs -> " << opts.out_dir
                      << '\n';
            for (std::size_t i = 0; i < result.reports.size(); ++i) {
                const auto& r = result.reports[i];
                std::cout << "  rung " << i << ": snr="
                          << ionsense::util::format_g(r.snr, 4) << " force_sensitivity="
                          << ionsense::util::format_g(r.force_sensitivity, 4) << " N/sqrt(Hz)\n";
            }
        } else if (budget->parsed()) {
            const auto result =
                ionsense::runner::cmd_sensitivity_budget(load_spec(opts), make_context(opts));
            std::cout << "sensitivity-budget: " << result.rows.size() << " scenarios -> "
                      << opts.out_dir << '\n';
        } else if (calibrate->parsed()) {
            return run_calibrate(opts);
        }
    } catch (const SpecError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: invalid spec: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
