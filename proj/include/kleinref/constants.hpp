#pragma once

#include <numbers>

namespace kleinref {

// Exact SI defining constants (2019 redefinition).
inline constexpr double speed_of_light = 299792458.0;      // m/s
inline constexpr double hbar = 1.054571817e-34;            // J*s (CODATA 2018)
inline constexpr double joule_per_ev = 1.602176634e-19;    // J/eV
inline constexpr double joule_per_uev = 1.602176634e-25;   // J/ueV

inline constexpr double pi = std::numbers::pi;

[[nodiscard]] constexpr double uev_to_joule(double uev) { return uev * joule_per_uev; }
[[nodiscard]] constexpr double joule_to_uev(double j) { return j / joule_per_uev; }

} // namespace kleinref
