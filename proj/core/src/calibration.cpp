#include "ionsense/calibration.hpp"

#include <stdexcept>

namespace ionsense::physics {

FieldCalibration calibrate_force(const FieldCalibrationInput& in, double charge) {
    if (!(charge > 0.0)) throw std::invalid_argument("calibrate_force: charge must be > 0");

    FieldCalibration out;
    if (in.field_at_ions.has_value()) {
        if (in.applied_voltage.has_value() && in.geometry_factor.has_value())
            throw std::invalid_argument(
                "calibrate_force: over-determined (field, voltage and geometry factor all given)");
        out.field_at_ions = *in.field_at_ions;
        if (!(out.field_at_ions >= 0.0))
            throw std::invalid_argument("calibrate_force: field_at_ions must be >= 0");
        out.applied_voltage = in.applied_voltage;
        out.geometry_factor = in.geometry_factor;
        if (in.applied_voltage.has_value()) {
            if (!(*in.applied_voltage > 0.0))
                throw std::invalid_argument("calibrate_force: applied_voltage must be > 0");
            out.geometry_factor = out.field_at_ions / *in.applied_voltage;
        } else if (in.geometry_factor.has_value()) {
            if (!(*in.geometry_factor > 0.0))
                throw std::invalid_argument("calibrate_force: geometry_factor must be > 0");
            out.applied_voltage = out.field_at_ions / *in.geometry_factor;
        }
    } else if (in.applied_voltage.has_value() && in.geometry_factor.has_value()) {
        if (!(*in.applied_voltage >= 0.0))
            throw std::invalid_argument("calibrate_force: applied_voltage must be >= 0");
        if (!(*in.geometry_factor > 0.0))
            throw std::invalid_argument("calibrate_force: geometry_factor must be > 0");
        out.applied_voltage = in.applied_voltage;
        out.geometry_factor = in.geometry_factor;
        out.field_at_ions = *in.geometry_factor * *in.applied_voltage;
    } else {
        throw std::invalid_argument(
            "calibrate_force: under-determined (need field_at_ions, or applied_voltage with "
            "geometry_factor)");
    }

    out.force_per_ion = charge * out.field_at_ions;
    return out;
}

}  // namespace ionsense::physics
