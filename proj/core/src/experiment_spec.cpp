#include "ionsense/experiment_spec.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ionsense/constants.hpp"

namespace ionsense::runner {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw SpecError("spec: " + where + ": " + what);
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(where, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known) fail(where, "unknown key '" + it.key() + "'");
    }
}

double get_num(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) fail(where, std::string("missing required key '") + key + "'");
    const auto& v = obj.at(key);
    if (!v.is_number()) fail(where + "." + key, "expected a number");
    return v.get<double>();
}

double get_num_or(const json& obj, const std::string& where, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number()) fail(where + "." + key, "expected a number");
    return v.get<double>();
}

std::int64_t get_int(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) fail(where, std::string("missing required key '") + key + "'");
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
    return v.get<std::int64_t>();
}

std::int64_t get_int_or(const json& obj, const std::string& where, const char* key,
                        std::int64_t fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
    return v.get<std::int64_t>();
}

bool get_bool_or(const json& obj, const std::string& where, const char* key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_boolean()) fail(where + "." + key, "expected a boolean");
    return v.get<bool>();
}

std::string get_str(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) fail(where, std::string("missing required key '") + key + "'");
    const auto& v = obj.at(key);
    if (!v.is_string()) fail(where + "." + key, "expected a string");
    return v.get<std::string>();
}

physics::TrapConfig parse_trap(const json& obj) {
    check_keys(obj, "trap",
               {"ion_mass_kg", "ion_count", "omega_z_hz", "temperature_k", "charge_c",
                "omega_z_drift_step_hz"});
    physics::TrapConfig trap;
    trap.ion_mass = get_num_or(obj, "trap", "ion_mass_kg", physics::be9_ion_mass);
    trap.ion_count = get_int(obj, "trap", "ion_count");
    trap.omega_z = physics::two_pi * get_num(obj, "trap", "omega_z_hz");
    trap.temperature = get_num_or(obj, "trap", "temperature_k", 0.0);
    trap.charge = get_num_or(obj, "trap", "charge_c", physics::elementary_charge);
    trap.omega_z_drift_step =
        physics::two_pi * get_num_or(obj, "trap", "omega_z_drift_step_hz", 0.0);
    return trap;
}

photon::DetectionConfig parse_detection(const json& obj) {
    check_keys(obj, "detection",
               {"gamma_hz", "wavevector_rad_per_m", "detuning_hz", "base_rate_hz",
                "hardware_delay_s", "detect_window_s", "damping_time_s", "rate_model",
                "acquisition_mode", "bin_width_s"});
    photon::DetectionConfig cfg;
    if (obj.contains("gamma_hz")) cfg.gamma = physics::two_pi * get_num(obj, "detection", "gamma_hz");
    cfg.wavevector = get_num_or(obj, "detection", "wavevector_rad_per_m", cfg.wavevector);
    if (obj.contains("detuning_hz"))
        cfg.detuning = physics::two_pi * get_num(obj, "detection", "detuning_hz");
    else
        cfg.detuning = -0.5 * cfg.gamma;
    cfg.base_rate = get_num_or(obj, "detection", "base_rate_hz", cfg.base_rate);
    cfg.hardware_delay = get_num_or(obj, "detection", "hardware_delay_s", cfg.hardware_delay);
    cfg.detect_window = get_num_or(obj, "detection", "detect_window_s", cfg.detect_window);
    cfg.damping_time = get_num_or(obj, "detection", "damping_time_s", cfg.damping_time);
    if (obj.contains("rate_model")) {
        try {
            cfg.rate_model = photon::rate_model_from_string(get_str(obj, "detection", "rate_model"));
        } catch (const std::invalid_argument& e) {
            fail("detection.rate_model", e.what());
        }
    }
    if (obj.contains("acquisition_mode")) {
        try {
            cfg.acquisition_mode =
                photon::acquisition_mode_from_string(get_str(obj, "detection", "acquisition_mode"));
        } catch (const std::invalid_argument& e) {
            fail("detection.acquisition_mode", e.what());
        }
    }
    cfg.bin_width = get_num_or(obj, "detection", "bin_width_s", cfg.bin_width);
    return cfg;
}

}  // namespace

std::vector<double> SweepGrid::expand() const {
    std::vector<double> omegas(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        omegas[static_cast<std::size_t>(i)] =
            omega_start + (omega_stop - omega_start) * static_cast<double>(i) /
                              static_cast<double>(points - 1);
    return omegas;
}

double AnalysisSettings::resolved_exclude_before(const photon::DetectionConfig& cfg) const {
    return exclude_before >= 0.0 ? exclude_before : cfg.hardware_delay;
}

std::pair<double, double> AnalysisSettings::resolved_band(const physics::TrapConfig& trap) const {
    if (snr_band_lo_hz >= 0.0 && snr_band_hi_hz > 0.0)
        return {snr_band_lo_hz, snr_band_hi_hz};
    const double f0 = trap.omega_z / physics::two_pi;
    return {0.93 * f0, 1.07 * f0};
}

void ExperimentSpec::validate() const {
    try {
        trap.validate();
        detection.validate();
    } catch (const std::invalid_argument& e) {
        throw SpecError(std::string("spec: ") + e.what());
    }

    int modes = 0;
    modes += drive.has_value() ? 1 : 0;
    modes += drive_sweep.has_value() ? 1 : 0;
    modes += force_ladder.has_value() ? 1 : 0;
    if (modes > 1) throw SpecError("spec: drive, drive_sweep and force_ladder are mutually exclusive");
    if (modes == 0 && budget_scenarios.empty())
        throw SpecError("spec: one of drive, drive_sweep, force_ladder or budget_scenarios is required");

    try {
        if (drive) drive->validate();
        if (drive_sweep) {
            if (drive_sweep->grid.points < 2) throw SpecError("spec: drive_sweep.points must be >= 2");
            if (!(drive_sweep->grid.omega_start < drive_sweep->grid.omega_stop))
                throw SpecError("spec: drive_sweep frequency range must be increasing");
            for (double w : {drive_sweep->grid.omega_start, drive_sweep->grid.omega_stop}) {
                physics::DriveConfig probe;
                probe.force_per_ion = drive_sweep->force_per_ion;
                probe.omega_d = w;
                probe.drive_duration = drive_sweep->drive_duration;
                probe.validate();
                if (std::abs(w - trap.omega_z) / trap.omega_z >= 0.1)
                    throw SpecError("spec: drive_sweep grid leaves the response-model window");
            }
        }
        if (force_ladder) {
            if (force_ladder->forces_per_ion.empty())
                throw SpecError("spec: force_ladder.forces_per_ion must be nonempty");
            for (double f : force_ladder->forces_per_ion) {
                physics::DriveConfig probe;
                probe.force_per_ion = f;
                probe.omega_d = force_ladder->omega_d;
                probe.drive_duration = force_ladder->drive_duration;
                probe.validate();
            }
        }
    } catch (const std::invalid_argument& e) {
        throw SpecError(std::string("spec: ") + e.what());
    }

    if (modes > 0 && run.n_cycles < 1) throw SpecError("spec: run.n_cycles must be >= 1");
    if (!(run.cooling_dead_time >= 0.0))
        throw SpecError("spec: run.cooling_dead_time_s must be >= 0");
    for (const auto& s : budget_scenarios) {
        if (s.name.empty()) throw SpecError("spec: budget scenario without a name");
        if (s.ion_count < 1) throw SpecError("spec: budget scenario ion_count must be >= 1");
        if (!(s.drive_duration > 0.0))
            throw SpecError("spec: budget scenario drive_duration_s must be > 0");
        if (!(s.collection_gain >= 0.0))
            throw SpecError("spec: budget scenario collection_gain must be >= 0");
    }
}

ExperimentSpec parse_experiment_spec(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SpecError(std::string("spec: JSON parse error: ") + e.what());
    }
    check_keys(root, "(top level)",
               {"trap", "detection", "drive", "drive_sweep", "force_ladder", "budget_scenarios",
                "run", "analysis"});

    ExperimentSpec spec;
    if (!root.contains("trap")) fail("(top level)", "missing required section 'trap'");
    spec.trap = parse_trap(root.at("trap"));
    if (root.contains("detection")) spec.detection = parse_detection(root.at("detection"));

    if (root.contains("drive")) {
        const auto& obj = root.at("drive");
        check_keys(obj, "drive", {"force_per_ion_n", "omega_d_hz", "drive_duration_s"});
        physics::DriveConfig d;
        d.force_per_ion = get_num(obj, "drive", "force_per_ion_n");
        d.omega_d = physics::two_pi * get_num(obj, "drive", "omega_d_hz");
        d.drive_duration = get_num(obj, "drive", "drive_duration_s");
        spec.drive = d;
    }
    if (root.contains("drive_sweep")) {
        const auto& obj = root.at("drive_sweep");
        check_keys(obj, "drive_sweep",
                   {"force_per_ion_n", "drive_duration_s", "omega_d_start_hz", "omega_d_stop_hz",
                    "points"});
        ExperimentSpec::Sweep sweep;
        sweep.force_per_ion = get_num(obj, "drive_sweep", "force_per_ion_n");
        sweep.drive_duration = get_num(obj, "drive_sweep", "drive_duration_s");
        sweep.grid.omega_start = physics::two_pi * get_num(obj, "drive_sweep", "omega_d_start_hz");
        sweep.grid.omega_stop = physics::two_pi * get_num(obj, "drive_sweep", "omega_d_stop_hz");
        sweep.grid.points = static_cast<int>(get_int(obj, "drive_sweep", "points"));
        spec.drive_sweep = sweep;
    }
    if (root.contains("force_ladder")) {
        const auto& obj = root.at("force_ladder");
        check_keys(obj, "force_ladder", {"forces_per_ion_n", "omega_d_hz", "drive_duration_s"});
        ExperimentSpec::Ladder ladder;
        if (!obj.contains("forces_per_ion_n") || !obj.at("forces_per_ion_n").is_array())
            fail("force_ladder.forces_per_ion_n", "expected an array of numbers");
        for (const auto& v : obj.at("forces_per_ion_n")) {
            if (!v.is_number()) fail("force_ladder.forces_per_ion_n", "expected an array of numbers");
            ladder.forces_per_ion.push_back(v.get<double>());
        }
        ladder.omega_d = physics::two_pi * get_num(obj, "force_ladder", "omega_d_hz");
        ladder.drive_duration = get_num(obj, "force_ladder", "drive_duration_s");
        spec.force_ladder = ladder;
    }
    if (root.contains("budget_scenarios")) {
        const auto& arr = root.at("budget_scenarios");
        if (!arr.is_array()) fail("budget_scenarios", "expected an array");
        for (const auto& obj : arr) {
            check_keys(obj, "budget_scenarios[]",
                       {"name", "ion_count", "drive_duration_s", "collection_gain",
                        "zero_dead_time"});
            analysis::BudgetScenario s;
            s.name = get_str(obj, "budget_scenarios[]", "name");
            s.ion_count = get_int(obj, "budget_scenarios[]", "ion_count");
            s.drive_duration = get_num(obj, "budget_scenarios[]", "drive_duration_s");
            s.collection_gain = get_num_or(obj, "budget_scenarios[]", "collection_gain", 1.0);
            s.zero_dead_time = get_bool_or(obj, "budget_scenarios[]", "zero_dead_time", false);
            spec.budget_scenarios.push_back(std::move(s));
        }
    }

    if (!root.contains("run")) fail("(top level)", "missing required section 'run'");
    {
        const auto& obj = root.at("run");
        check_keys(obj, "run", {"n_cycles", "base_seed", "cooling_dead_time_s"});
        spec.run.n_cycles = get_int_or(obj, "run", "n_cycles", 0);
        if (!obj.contains("base_seed"))
            fail("run", "missing required key 'base_seed' (wall-clock seeding is not supported)");
        const auto& seed = obj.at("base_seed");
        if (!seed.is_number_integer() || seed.get<std::int64_t>() < 0)
            fail("run.base_seed", "expected a non-negative integer");
        spec.run.base_seed = seed.get<std::uint64_t>();
        spec.run.cooling_dead_time =
            get_num_or(obj, "run", "cooling_dead_time_s", spec.run.cooling_dead_time);
    }

    if (root.contains("analysis")) {
        const auto& obj = root.at("analysis");
        check_keys(obj, "analysis",
                   {"exclude_before_s", "snr_band_hz", "force_rel_uncertainty",
                    "ion_count_rel_uncertainty"});
        spec.analysis.exclude_before = get_num_or(obj, "analysis", "exclude_before_s", -1.0);
        if (obj.contains("snr_band_hz")) {
            const auto& band = obj.at("snr_band_hz");
            if (!band.is_array() || band.size() != 2 || !band[0].is_number() || !band[1].is_number())
                fail("analysis.snr_band_hz", "expected [low_hz, high_hz]");
            spec.analysis.snr_band_lo_hz = band[0].get<double>();
            spec.analysis.snr_band_hi_hz = band[1].get<double>();
        }
        spec.analysis.uncertainties.force_rel =
            get_num_or(obj, "analysis", "force_rel_uncertainty", 0.0);
        spec.analysis.uncertainties.ion_count_rel =
            get_num_or(obj, "analysis", "ion_count_rel_uncertainty", 0.0);
    }

    spec.validate();
    return spec;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpecError("spec: cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_experiment_spec(buf.str());
}

std::string canonical_spec_json(const ExperimentSpec& spec) {
    json root;
    root["trap"] = {{"ion_mass_kg", spec.trap.ion_mass},
                    {"ion_count", spec.trap.ion_count},
                    {"omega_z_rad_per_s", spec.trap.omega_z},
                    {"temperature_k", spec.trap.temperature},
                    {"charge_c", spec.trap.charge},
                    {"omega_z_drift_step_rad_per_s", spec.trap.omega_z_drift_step}};
    root["detection"] = {{"gamma_rad_per_s", spec.detection.gamma},
                         {"wavevector_rad_per_m", spec.detection.wavevector},
                         {"detuning_rad_per_s", spec.detection.detuning},
                         {"base_rate_hz", spec.detection.base_rate},
                         {"hardware_delay_s", spec.detection.hardware_delay},
                         {"detect_window_s", spec.detection.detect_window},
                         {"damping_time_s", spec.detection.damping_time},
                         {"rate_model", photon::to_string(spec.detection.rate_model)},
                         {"acquisition_mode", photon::to_string(spec.detection.acquisition_mode)},
                         {"bin_width_s", spec.detection.bin_width}};
    if (spec.drive)
        root["drive"] = {{"force_per_ion_n", spec.drive->force_per_ion},
                         {"omega_d_rad_per_s", spec.drive->omega_d},
                         {"drive_duration_s", spec.drive->drive_duration}};
    if (spec.drive_sweep)
        root["drive_sweep"] = {{"force_per_ion_n", spec.drive_sweep->force_per_ion},
                               {"drive_duration_s", spec.drive_sweep->drive_duration},
                               {"omega_d_start_rad_per_s", spec.drive_sweep->grid.omega_start},
                               {"omega_d_stop_rad_per_s", spec.drive_sweep->grid.omega_stop},
                               {"points", spec.drive_sweep->grid.points}};
    if (spec.force_ladder)
        root["force_ladder"] = {{"forces_per_ion_n", spec.force_ladder->forces_per_ion},
                                {"omega_d_rad_per_s", spec.force_ladder->omega_d},
                                {"drive_duration_s", spec.force_ladder->drive_duration}};
    if (!spec.budget_scenarios.empty()) {
        json arr = json::array();
        for (const auto& s : spec.budget_scenarios)
            arr.push_back({{"name", s.name},
                           {"ion_count", s.ion_count},
                           {"drive_duration_s", s.drive_duration},
                           {"collection_gain", s.collection_gain},
                           {"zero_dead_time", s.zero_dead_time}});
        root["budget_scenarios"] = std::move(arr);
    }
    root["run"] = {{"n_cycles", spec.run.n_cycles},
                   {"base_seed", spec.run.base_seed},
                   {"cooling_dead_time_s", spec.run.cooling_dead_time}};
    root["analysis"] = {{"exclude_before_s", spec.analysis.exclude_before},
                        {"snr_band_lo_hz", spec.analysis.snr_band_lo_hz},
                        {"snr_band_hi_hz", spec.analysis.snr_band_hi_hz},
                        {"force_rel_uncertainty", spec.analysis.uncertainties.force_rel},
                        {"ion_count_rel_uncertainty", spec.analysis.uncertainties.ion_count_rel}};
    return root.dump();
}

}  // namespace ionsense::runner
