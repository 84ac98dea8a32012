#pragma once

#include <cmath>
#include <complex>

namespace kleinref {

using Complex = std::complex<double>;

// In-plane vector. The scattering geometry lives in the x-z plane with the
// interface at z = 0 and its normal along +z; x is the transverse direction.
struct Vec2 {
    double x = 0.0;
    double z = 0.0;
};

[[nodiscard]] constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.z * b.z; }

[[nodiscard]] inline double magnitude(Vec2 v) { return std::hypot(v.x, v.z); }

// e^{i phi} without going through std::exp(Complex).
[[nodiscard]] inline Complex cis(double phi) { return {std::cos(phi), std::sin(phi)}; }

} // namespace kleinref
