#include <doctest.h>

#include <cmath>

#include "ionsense/detection.hpp"

using namespace ionsense::photon;
using ionsense::physics::two_pi;

TEST_CASE("zero velocity returns the base rate in both models") {
    DetectionConfig cfg;
    cfg.rate_model = RateModel::linear;
    CHECK(scatter_rate(0.0, cfg) == cfg.base_rate);
    cfg.rate_model = RateModel::lorentzian;
    CHECK(scatter_rate(0.0, cfg) == doctest::Approx(cfg.base_rate).epsilon(1e-14));
}

TEST_CASE("linear modulation depth at 0.097 m/s is about 3.3 percent") {
    DetectionConfig cfg;
    cfg.rate_model = RateModel::linear;
    const double rate = scatter_rate(0.097, cfg);
    const double depth = rate / cfg.base_rate - 1.0;
    CHECK(depth == doctest::Approx(0.0326).epsilon(2e-3));
}

TEST_CASE("linear model clamps at zero for large opposing velocities") {
    DetectionConfig cfg;
    cfg.rate_model = RateModel::linear;
    CHECK(scatter_rate(-20.0, cfg) == 0.0);
}

TEST_CASE("lorentzian reduces to the linear model at small Doppler shifts") {
    DetectionConfig linear;
    linear.rate_model = RateModel::linear;
    DetectionConfig lorentz = linear;
    lorentz.rate_model = RateModel::lorentzian;

    // |k v| / gamma < 0.02  <=>  |v| < 0.02 gamma / k.
    const double v_max = 0.02 * linear.gamma / linear.wavevector;
    for (int i = -10; i <= 10; ++i) {
        const double v = v_max * static_cast<double>(i) / 10.0;
        const double a = scatter_rate(v, linear);
        const double b = scatter_rate(v, lorentz);
        CHECK(std::abs(a - b) <= 0.01 * linear.base_rate);
    }
}

TEST_CASE("blue-shifting far past the resonance kills the rate") {
    DetectionConfig cfg;
    cfg.rate_model = RateModel::lorentzian;
    // k v >> gamma, sign that pushes the effective detuning deep blue.
    const double v = 10.0 * cfg.gamma / cfg.wavevector;
    CHECK(scatter_rate(v, cfg) < 0.05 * cfg.base_rate);
}

TEST_CASE("the lorentzian rate peaks when the Doppler shift cancels the detuning") {
    DetectionConfig cfg;
    cfg.rate_model = RateModel::lorentzian;
    const double v_res = -cfg.detuning / cfg.wavevector;  // detuning + k v = 0
    const double on_res = scatter_rate(v_res, cfg);
    CHECK(on_res == doctest::Approx(2.0 * cfg.base_rate).epsilon(1e-12));
    CHECK(scatter_rate(0.9 * v_res, cfg) < on_res);
}

TEST_CASE("the thinning bound dominates the rate over the admissible range") {
    for (auto model : {RateModel::linear, RateModel::lorentzian}) {
        DetectionConfig cfg;
        cfg.rate_model = model;
        for (double v_max : {0.05, 0.5, 3.0, 12.0}) {
            const double bound = rate_upper_bound(v_max, cfg);
            for (int i = -20; i <= 20; ++i) {
                const double v = v_max * static_cast<double>(i) / 20.0;
                CHECK(scatter_rate(v, cfg) <= bound * (1.0 + 1e-12));
            }
        }
    }
}

TEST_CASE("config invariants are validated") {
    DetectionConfig cfg;
    SUBCASE("bin width vs window") {
        cfg.bin_width = cfg.detect_window / 5.0;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SUBCASE("window shorter than delay") {
        cfg.detect_window = cfg.hardware_delay / 2.0;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SUBCASE("negative base rate") {
        cfg.base_rate = -1.0;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SUBCASE("nonpositive gamma") {
        cfg.gamma = 0.0;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
}

TEST_CASE("enum round trips") {
    CHECK(rate_model_from_string(to_string(RateModel::lorentzian)) == RateModel::lorentzian);
    CHECK(acquisition_mode_from_string(to_string(AcquisitionMode::tac_first_photon)) ==
          AcquisitionMode::tac_first_photon);
    CHECK_THROWS_AS((void)rate_model_from_string("gaussian"), std::invalid_argument);
}
