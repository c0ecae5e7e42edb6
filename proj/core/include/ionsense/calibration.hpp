#pragma once

#include <optional>

namespace ionsense::physics {

/// Inputs for completing an electric-field force calibration. Supply either
/// the field directly, or a voltage together with the electrode geometry
/// factor. Supplying the field and a voltage fixes the geometry factor.
struct FieldCalibrationInput {
    std::optional<double> applied_voltage;   // V, zero-to-peak at the endcap
    std::optional<double> field_at_ions;     // V/m
    std::optional<double> geometry_factor;   // 1/m, field per applied volt
};

struct FieldCalibration {
    std::optional<double> applied_voltage;   // V
    std::optional<double> geometry_factor;   // 1/m
    double field_at_ions = 0.0;              // V/m
    double force_per_ion = 0.0;              // N
};

/// Completes the (voltage, field, force) triple with F = q E and the linear
/// voltage-to-field map E = g V. Throws on over- or under-determined input.
FieldCalibration calibrate_force(const FieldCalibrationInput& in, double charge);

}  // namespace ionsense::physics
