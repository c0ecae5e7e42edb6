#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace ionsense::util {

/// Finalizer from the splitmix64 generator. Used to derive decorrelated
/// engine seeds from (user seed, stream tag) pairs.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Purpose tags for the random streams that share one cycle seed.
/// Thermal-state draws and photon draws must never consume from the same
/// stream or a reseeded engine would replay values across purposes.
enum class Stream : std::uint64_t {
    thermal = 0x7468726d6cull,
    photons = 0x70686f746eull,
    drift = 0x64726966ull,
    sweep = 0x73776570ull,
};

inline std::mt19937_64 make_engine(std::uint64_t seed, Stream stream) {
    return std::mt19937_64(splitmix64(seed ^ static_cast<std::uint64_t>(stream)));
}

/// Uniform double in [0, 1) from the top 53 bits of the engine output.
/// The std distributions are implementation-defined; these mappings are not,
/// so traces are reproducible across standard libraries.
inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return lo + (hi - lo) * uniform01(g);
}

/// Exponential deviate with the given rate (mean 1/rate).
inline double exponential(std::mt19937_64& g, double rate) {
    return -std::log1p(-uniform01(g)) / rate;
}

/// Standard normal deviate (Box-Muller, one value per call).
inline double normal(std::mt19937_64& g) {
    const double u1 = 1.0 - uniform01(g);  // (0, 1]
    const double u2 = uniform01(g);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace ionsense::util
