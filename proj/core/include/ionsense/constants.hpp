#pragma once

#include <numbers>

namespace ionsense::physics {

// SI. Exact values where the 2019 redefinition fixed them.
inline constexpr double k_boltzmann = 1.380649e-23;           // J/K
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double atomic_mass_unit = 1.66053906660e-27; // kg

/// Mass of a 9Be+ ion: neutral 9Be minus one electron.
inline constexpr double be9_ion_mass =
    (9.0121831 - 5.48579909e-4) * atomic_mass_unit;  // kg

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Default detection-transition parameters for 9Be+ near 313 nm.
inline constexpr double be9_linewidth = two_pi * 19.0e6;          // rad/s
inline constexpr double be9_wavevector = two_pi / 313.0e-9;       // rad/m

}  // namespace ionsense::physics
