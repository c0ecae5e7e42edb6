#include "ionsense/runner.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ionsense/numfmt.hpp"
#include "ionsense/photon_engine.hpp"
#include "ionsense/rng.hpp"
#include "ionsense/sha256.hpp"
#include "ionsense/version.hpp"

namespace ionsense::runner {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using util::format_g15;

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

class StageClock {
  public:
    explicit StageClock(RunManifest& manifest) : manifest_(manifest) {}
    void finish(const std::string& name) {
        const auto now = std::chrono::steady_clock::now();
        manifest_.stages.push_back(
            {name, std::chrono::duration<double>(now - last_).count()});
        last_ = now;
    }

  private:
    RunManifest& manifest_;
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

/// Writes `content` under out_dir and records it in the manifest inventory.
void persist(RunManifest& manifest, const std::string& out_dir, const std::string& name,
             const std::string& content) {
    const fs::path path = fs::path(out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
    manifest.outputs.push_back({name, util::sha256_hex(content), content.size()});
}

RunManifest make_manifest(const std::string& command, const ExperimentSpec& spec) {
    RunManifest manifest;
    manifest.command = command;
    manifest.spec_sha256 = util::sha256_hex(canonical_spec_json(spec));
    manifest.tool_version = ionsense::version;
    manifest.created_utc = utc_now();
    return manifest;
}

void prepare_out_dir(const RunContext& ctx) {
    if (ctx.out_dir.empty()) throw std::invalid_argument("runner: out_dir must not be empty");
    fs::create_directories(ctx.out_dir);
}

std::string table_extension(OutputFormat f) { return f == OutputFormat::csv ? ".csv" : ".json"; }

/// Renders a numeric table as CSV (g15 cells) or as a columns/rows JSON
/// document, matching the --format flag.
std::string render_table(OutputFormat format, const std::vector<std::string>& columns,
                         const std::vector<std::vector<double>>& rows) {
    if (format == OutputFormat::csv) {
        std::ostringstream out;
        for (std::size_t c = 0; c < columns.size(); ++c)
            out << columns[c] << (c + 1 < columns.size() ? ',' : '\n');
        for (const auto& row : rows)
            for (std::size_t c = 0; c < row.size(); ++c)
                out << format_g15(row[c]) << (c + 1 < row.size() ? ',' : '\n');
        return out.str();
    }
    json doc;
    doc["schema_version"] = 1;
    doc["columns"] = columns;
    doc["rows"] = rows;
    return doc.dump();
}

std::string render_histogram(OutputFormat format, const analysis::ArrivalHistogram& hist) {
    std::vector<std::vector<double>> rows;
    rows.reserve(hist.size());
    for (std::size_t i = 0; i < hist.size(); ++i)
        rows.push_back({hist.bin_edges[i], hist.bin_edges[i + 1],
                        static_cast<double>(hist.counts[i])});
    return render_table(format, {"bin_start_s", "bin_end_s", "count"}, rows);
}

json report_to_json(const analysis::SensitivityReport& r) {
    return json{{"total_force_n", r.total_force},
                {"total_force_sigma_n", r.total_force_sigma},
                {"snr", r.snr},
                {"snr_sigma", r.snr_sigma},
                {"measurement_time_s", r.measurement_time},
                {"bandwidth_hz", r.bandwidth},
                {"force_sensitivity_n_per_sqrt_hz", r.force_sensitivity},
                {"force_sensitivity_sigma_n_per_sqrt_hz", r.force_sensitivity_sigma},
                {"displacement_m", r.displacement},
                {"displacement_sigma_m", r.displacement_sigma},
                {"displacement_sensitivity_m_per_sqrt_hz", r.displacement_sensitivity},
                {"displacement_sensitivity_sigma_m_per_sqrt_hz", r.displacement_sensitivity_sigma}};
}

}  // namespace

OutputFormat output_format_from_string(const std::string& s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    throw std::invalid_argument("unknown output format: " + s);
}

void write_manifest(const RunManifest& manifest, const std::string& out_dir) {
    json doc;
    doc["schema_version"] = manifest.schema_version;
    doc["command"] = manifest.command;
    doc["spec_sha256"] = manifest.spec_sha256;
    doc["tool_version"] = manifest.tool_version;
    doc["created_utc"] = manifest.created_utc;
    json stages = json::array();
    for (const auto& s : manifest.stages)
        stages.push_back({{"name", s.name}, {"wall_seconds", s.wall_seconds}});
    doc["stages"] = std::move(stages);
    json outputs = json::array();
    for (const auto& o : manifest.outputs)
        outputs.push_back({{"path", o.path}, {"sha256", o.sha256}, {"bytes", o.bytes}});
    doc["outputs"] = std::move(outputs);

    const fs::path path = fs::path(out_dir) / "manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << doc.dump(2) << '\n';
}

RunManifest read_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open manifest: " + path);
    json doc = json::parse(in);
    RunManifest manifest;
    manifest.schema_version = doc.at("schema_version").get<int>();
    manifest.command = doc.at("command").get<std::string>();
    manifest.spec_sha256 = doc.at("spec_sha256").get<std::string>();
    manifest.tool_version = doc.at("tool_version").get<std::string>();
    manifest.created_utc = doc.at("created_utc").get<std::string>();
    for (const auto& s : doc.at("stages"))
        manifest.stages.push_back(
            {s.at("name").get<std::string>(), s.at("wall_seconds").get<double>()});
    for (const auto& o : doc.at("outputs"))
        manifest.outputs.push_back({o.at("path").get<std::string>(),
                                    o.at("sha256").get<std::string>(),
                                    o.at("bytes").get<std::uint64_t>()});
    return manifest;
}

double measurement_time(const ExperimentSpec& spec, double drive_duration) {
    return static_cast<double>(spec.run.n_cycles) *
           (spec.run.cooling_dead_time + drive_duration + spec.detection.detect_window);
}

SimulateResult cmd_simulate(const ExperimentSpec& spec, const RunContext& ctx) {
    spec.validate();
    if (!spec.drive) throw SpecError("spec: simulate requires a 'drive' section");
    prepare_out_dir(ctx);

    SimulateResult result;
    result.manifest = make_manifest("simulate", spec);
    StageClock clock(result.manifest);

    const auto traces = photon::run_experiment(spec.trap, *spec.drive, spec.detection,
                                               spec.run.n_cycles, spec.run.base_seed, ctx.workers);
    clock.finish("simulate");

    for (const auto& t : traces) result.total_events += t.arrival_times.size();

    std::string events;
    {
        std::ostringstream out;
        if (ctx.format == OutputFormat::csv) {
            photon::write_events_csv(traces, out);
        } else {
            json rows = json::array();
            for (const auto& t : traces)
                for (double at : t.arrival_times)
                    rows.push_back({t.cycle_index, at});
            json doc;
            doc["schema_version"] = 1;
            doc["columns"] = {"cycle_index", "arrival_time_s"};
            doc["rows"] = std::move(rows);
            out << doc.dump();
        }
        events = out.str();
    }
    persist(result.manifest, ctx.out_dir, "events" + table_extension(ctx.format), events);

    const auto hist = analysis::build_histogram(traces, spec.detection.bin_width,
                                                spec.detection.detect_window,
                                                spec.detection.acquisition_mode);
    persist(result.manifest, ctx.out_dir, "histogram" + table_extension(ctx.format),
            render_histogram(ctx.format, hist));

    if (spec.detection.acquisition_mode == photon::AcquisitionMode::tac_first_photon &&
        hist.total_counts() > 0) {
        const double fit_start = spec.analysis.resolved_exclude_before(spec.detection);
        const auto fit = analysis::fit_exponential_background(hist, fit_start);
        json fit_doc;
        fit_doc["schema_version"] = 1;
        fit_doc["amplitude_counts"] = fit.amplitude;
        fit_doc["decay_time_s"] = fit.decay_time;
        fit_doc["fit_start_s"] = fit_start;
        persist(result.manifest, ctx.out_dir, "background_fit.json", fit_doc.dump());

        std::vector<std::vector<double>> rows;
        rows.reserve(hist.size());
        for (std::size_t i = 0; i < hist.size(); ++i)
            rows.push_back({hist.bin_center(i), fit.residuals[i]});
        persist(result.manifest, ctx.out_dir, "residuals" + table_extension(ctx.format),
                render_table(ctx.format, {"time_s", "residual"}, rows));
    }
    clock.finish("persist");

    write_manifest(result.manifest, ctx.out_dir);
    return result;
}

SweepFrequencyResult cmd_sweep_frequency(const ExperimentSpec& spec, const RunContext& ctx) {
    spec.validate();
    if (!spec.drive_sweep) throw SpecError("spec: sweep-frequency requires a 'drive_sweep' section");
    prepare_out_dir(ctx);

    SweepFrequencyResult result;
    result.manifest = make_manifest("sweep-frequency", spec);
    StageClock clock(result.manifest);

    physics::DriveConfig drive_template;
    drive_template.force_per_ion = spec.drive_sweep->force_per_ion;
    drive_template.drive_duration = spec.drive_sweep->drive_duration;
    drive_template.omega_d = spec.trap.omega_z;  // placeholder, replaced per point

    const auto omegas = spec.drive_sweep->grid.expand();
    result.sweep = analysis::frequency_sweep(
        spec.trap, drive_template, spec.detection, omegas, spec.run.n_cycles, spec.run.base_seed,
        spec.analysis.resolved_exclude_before(spec.detection), ctx.workers);
    clock.finish("sweep");

    // Map matrix: one header line of drive frequencies, one row per time bin.
    {
        std::vector<std::string> columns;
        columns.push_back("time_s");
        for (double w : result.sweep.omegas)
            columns.push_back(format_g15(w / physics::two_pi));
        std::vector<std::vector<double>> rows;
        rows.reserve(result.sweep.bin_centers.size());
        for (std::size_t b = 0; b < result.sweep.bin_centers.size(); ++b) {
            std::vector<double> row;
            row.reserve(result.sweep.omegas.size() + 1);
            row.push_back(result.sweep.bin_centers[b]);
            for (const auto& slice : result.sweep.residual_map) row.push_back(slice[b]);
            rows.push_back(std::move(row));
        }
        persist(result.manifest, ctx.out_dir, "map" + table_extension(ctx.format),
                render_table(ctx.format, columns, rows));
    }

    // Proxy curve with the closed-form overlay.
    {
        std::vector<std::vector<double>> rows;
        for (std::size_t p = 0; p < result.sweep.omegas.size(); ++p)
            rows.push_back({result.sweep.omegas[p] / physics::two_pi, result.sweep.proxy[p],
                            result.sweep.theory_velocity[p], result.sweep.theory_phase[p]});
        persist(result.manifest, ctx.out_dir, "proxy" + table_extension(ctx.format),
                render_table(ctx.format,
                             {"omega_d_hz", "proxy", "theory_velocity_m_per_s",
                              "theory_phase_rad"},
                             rows));
    }
    clock.finish("persist");

    write_manifest(result.manifest, ctx.out_dir);
    return result;
}

SweepForceResult cmd_sweep_force(const ExperimentSpec& spec, const RunContext& ctx) {
    spec.validate();
    if (!spec.force_ladder) throw SpecError("spec: sweep-force requires a 'force_ladder' section");
    prepare_out_dir(ctx);

    SweepForceResult result;
    result.manifest = make_manifest("sweep-force", spec);
    StageClock clock(result.manifest);

    const auto& ladder = *spec.force_ladder;
    const auto [band_lo, band_hi] = spec.analysis.resolved_band(spec.trap);
    const double exclude_before = spec.analysis.resolved_exclude_before(spec.detection);
    const double tau_m = measurement_time(spec, ladder.drive_duration);

    json reports_json = json::array();
    std::vector<std::vector<double>> reports_rows;

    for (std::size_t rung = 0; rung < ladder.forces_per_ion.size(); ++rung) {
        physics::DriveConfig drive;
        drive.force_per_ion = ladder.forces_per_ion[rung];
        drive.omega_d = ladder.omega_d;
        drive.drive_duration = ladder.drive_duration;

        const std::uint64_t rung_seed = util::splitmix64(
            spec.run.base_seed ^ (0x4c41444445520000ull + rung));
        const auto traces = photon::run_experiment(spec.trap, drive, spec.detection,
                                                   spec.run.n_cycles, rung_seed, ctx.workers);
        const auto hist = analysis::build_histogram(traces, spec.detection.bin_width,
                                                    spec.detection.detect_window,
                                                    spec.detection.acquisition_mode);
        const auto spectrum = analysis::power_spectrum(hist, exclude_before, band_lo, band_hi);
        const double total_force =
            drive.force_per_ion * static_cast<double>(spec.trap.ion_count);
        const auto report = analysis::sensitivity_report(spectrum, total_force, tau_m, spec.trap,
                                                         drive, spec.analysis.uncertainties);
        result.reports.push_back(report);

        char suffix[16];
        std::snprintf(suffix, sizeof suffix, "_%02zu", rung);
        persist(result.manifest, ctx.out_dir,
                std::string("trace") + suffix + table_extension(ctx.format),
                render_histogram(ctx.format, hist));
        {
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < spectrum.frequencies.size(); ++i)
                rows.push_back({spectrum.frequencies[i], spectrum.power[i]});
            persist(result.manifest, ctx.out_dir,
                    std::string("spectrum") + suffix + table_extension(ctx.format),
                    render_table(ctx.format, {"frequency_hz", "power"}, rows));
        }

        json rj = report_to_json(report);
        rj["rung_index"] = rung;
        rj["force_per_ion_n"] = drive.force_per_ion;
        rj["peak_frequency_hz"] = spectrum.peak_frequency;
        reports_json.push_back(std::move(rj));
        reports_rows.push_back({static_cast<double>(rung), drive.force_per_ion, total_force,
                                report.snr, spectrum.peak_frequency, report.force_sensitivity,
                                report.force_sensitivity_sigma, report.displacement,
                                report.displacement_sensitivity});
    }
    clock.finish("force-ladder");

    if (ctx.format == OutputFormat::csv) {
        persist(result.manifest, ctx.out_dir, "reports.csv",
                render_table(OutputFormat::csv,
                             {"rung_index", "force_per_ion_n", "total_force_n", "snr",
                              "peak_frequency_hz", "force_sensitivity_n_per_sqrt_hz",
                              "force_sensitivity_sigma_n_per_sqrt_hz", "displacement_m",
                              "displacement_sensitivity_m_per_sqrt_hz"},
                             reports_rows));
    } else {
        json doc;
        doc["schema_version"] = 1;
        doc["reports"] = std::move(reports_json);
        persist(result.manifest, ctx.out_dir, "reports.json", doc.dump());
    }
    clock.finish("persist");

    write_manifest(result.manifest, ctx.out_dir);
    return result;
}

BudgetResult cmd_sensitivity_budget(const ExperimentSpec& spec, const RunContext& ctx) {
    spec.validate();
    if (spec.budget_scenarios.empty())
        throw SpecError("spec: sensitivity-budget requires a 'budget_scenarios' section");
    prepare_out_dir(ctx);

    BudgetResult result;
    result.manifest = make_manifest("sensitivity-budget", spec);
    StageClock clock(result.manifest);

    for (const auto& scenario : spec.budget_scenarios)
        result.rows.push_back(analysis::sensitivity_budget_row(
            spec.trap, spec.detection, spec.run.cooling_dead_time, scenario));
    clock.finish("budget");

    if (ctx.format == OutputFormat::csv) {
        std::ostringstream out;
        out << "name,ion_count,drive_duration_s,detected_rate_hz,cycle_time_s,"
               "force_sensitivity_n_per_sqrt_hz,field_sensitivity_v_per_m_per_sqrt_hz,"
               "displacement_sensitivity_m_per_sqrt_hz\n";
        for (const auto& row : result.rows) {
            out << row.name << ',' << row.ion_count << ',' << format_g15(row.drive_duration)
                << ',' << format_g15(row.detected_rate) << ',' << format_g15(row.cycle_time)
                << ',' << format_g15(row.force_sensitivity) << ','
                << format_g15(row.field_sensitivity) << ','
                << format_g15(row.displacement_sensitivity) << '\n';
        }
        persist(result.manifest, ctx.out_dir, "budget.csv", out.str());
    } else {
        json rows = json::array();
        for (const auto& row : result.rows) {
            // JSON has no Inf; unbounded sensitivities are serialised as null.
            auto num = [](double v) {
                return std::isfinite(v) ? json(v) : json(nullptr);
            };
            rows.push_back({{"name", row.name},
                            {"ion_count", row.ion_count},
                            {"drive_duration_s", row.drive_duration},
                            {"detected_rate_hz", row.detected_rate},
                            {"cycle_time_s", row.cycle_time},
                            {"force_sensitivity_n_per_sqrt_hz", num(row.force_sensitivity)},
                            {"field_sensitivity_v_per_m_per_sqrt_hz", num(row.field_sensitivity)},
                            {"displacement_sensitivity_m_per_sqrt_hz",
                             num(row.displacement_sensitivity)}});
        }
        json doc;
        doc["schema_version"] = 1;
        doc["rows"] = std::move(rows);
        persist(result.manifest, ctx.out_dir, "budget.json", doc.dump());
    }
    clock.finish("persist");

    write_manifest(result.manifest, ctx.out_dir);
    return result;
}

}  // namespace ionsense::runner
