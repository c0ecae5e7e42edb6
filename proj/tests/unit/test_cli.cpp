// Process-level checks of the installed command surface: exit codes and the
// files each subcommand leaves behind.
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(IONSENSE_TOOL_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string tmp_dir(const std::string& name) {
    const auto dir = fs::path(IONSENSE_TEST_TMP) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

}  // namespace

TEST_CASE("help and version exit cleanly") {
    CHECK(run("--help") == 0);
    CHECK(run("--version") == 0);
    CHECK(run("simulate --help") == 0);
}

TEST_CASE("invalid specs exit with code 2") {
    const auto dir = tmp_dir("cli_invalid");
    const auto bad = fs::path(dir) / "bad.json";
    {
        std::ofstream out(bad);
        out << R"({"trap": {"ion_count": 0, "omega_z_hz": 867000.0},
                   "drive": {"force_per_ion_n": 0.0, "omega_d_hz": 867000.0, "drive_duration_s": 0.001},
                   "run": {"n_cycles": 1, "base_seed": 1}})";
    }
    CHECK(run("simulate --spec " + bad.string() + " --out-dir " + dir) == 2);

    const auto garbage = fs::path(dir) / "garbage.json";
    {
        std::ofstream out(garbage);
        out << "{ this is not json";
    }
    CHECK(run("simulate --spec " + garbage.string() + " --out-dir " + dir) == 2);

    // A spec missing the section the subcommand needs is also invalid.
    CHECK(run(std::string("sweep-frequency --spec ") + IONSENSE_SPECS_DIR +
              "/determinism_small.json --out-dir " + dir) == 2);
}

TEST_CASE("simulate runs a bundled spec end to end") {
    const auto dir = tmp_dir("cli_sim");
    CHECK(run(std::string("simulate --spec ") + IONSENSE_SPECS_DIR +
              "/determinism_small.json --out-dir " + dir + " --workers 2") == 0);
    CHECK(fs::exists(fs::path(dir) / "events.csv"));
    CHECK(fs::exists(fs::path(dir) / "histogram.csv"));
    CHECK(fs::exists(fs::path(dir) / "manifest.json"));
}

TEST_CASE("calibrate completes the bundled voltage-field pair") {
    const auto dir = tmp_dir("cli_cal");
    CHECK(run(std::string("calibrate --spec ") + IONSENSE_SPECS_DIR +
              "/calibration_example.json --out-dir " + dir) == 0);
    std::ifstream in(fs::path(dir) / "calibration.csv");
    REQUIRE(in);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header.find("force_per_ion_n") != std::string::npos);
    CHECK(row.find("2.88") != std::string::npos);  // 288.4 yN
}

TEST_CASE("seed override changes outputs, format flag switches tables to json") {
    const auto dir_a = tmp_dir("cli_seed_a");
    const auto dir_b = tmp_dir("cli_seed_b");
    const std::string spec = std::string(IONSENSE_SPECS_DIR) + "/determinism_small.json";
    CHECK(run("simulate --spec " + spec + " --out-dir " + dir_a + " --seed 9001") == 0);
    CHECK(run("simulate --spec " + spec + " --out-dir " + dir_b + " --seed 9002 --format json") ==
          0);
    CHECK(fs::exists(fs::path(dir_b) / "events.json"));
    CHECK(fs::file_size(fs::path(dir_a) / "events.csv") > 100);
}
