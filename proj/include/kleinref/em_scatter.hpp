#pragma once

#include <cmath>
#include <stdexcept>

#include "kleinref/constants.hpp"
#include "kleinref/errors.hpp"
#include "kleinref/media.hpp"
#include "kleinref/step_amplitudes.hpp"
#include "kleinref/types.hpp"

// TE plane wave from vacuum (z < 0) onto a dispersive half-space (z > 0).
// The transmitted normal wavenumber takes the branch matching the medium's
// index sign: in a double-negative medium the transmitted phase runs
// backward (Qz < 0) while energy still flows into z > 0 — negative
// refraction. Power balance: T = |tau|^2 Qz/(mu Kz), R = |rho|^2.

namespace kleinref {

struct EmIncident {
    double omega;   // rad/s
    double kx;      // rad/m, transverse
    double kz;      // rad/m, > 0 (toward the interface)
    double theta_i; // rad from the normal, in [0, pi/2)
};

[[nodiscard]] inline EmIncident make_em_incident(double omega, double theta_i) {
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw std::domain_error("make_em_incident: omega must be finite and > 0");
    if (!(theta_i >= 0.0) || !(theta_i < pi / 2.0))
        throw std::domain_error("make_em_incident: theta_i must lie in [0, pi/2)");
    const double k = omega / speed_of_light;
    return {omega, k * std::sin(theta_i), k * std::cos(theta_i), theta_i};
}

struct EmScatterResult {
    double qx = 0.0;         // rad/m, equals the incident kx (phase matching)
    Complex qz;              // rad/m; positive imaginary part on the evanescent branch
    double kx_reflect = 0.0; // rad/m
    double kz_reflect = 0.0; // rad/m, = -kz
    Complex tau;             // transmitted field amplitude
    Complex rho;             // reflected field amplitude
    double T = 0.0;          // power transmittance (0 when evanescent)
    double R = 0.0;          // power reflectance
    int sigma = 1;           // index branch: -1 double-negative, +1 otherwise
    [[nodiscard]] bool evanescent() const { return qz.imag() != 0.0 || qz == Complex{}; }
};

namespace detail {

inline void require_consistent_em(const EmIncident& inc) {
    if (!(inc.kz > 0.0))
        throw std::domain_error("refract_em: incident kz must be > 0");
    const double k = std::hypot(inc.kx, inc.kz);
    const double k_vac = inc.omega / speed_of_light;
    if (!(std::abs(k - k_vac) <= 1e-9 * k_vac))
        throw std::domain_error("refract_em: |K| inconsistent with omega/c");
}

} // namespace detail

[[nodiscard]] inline EmScatterResult refract_em(const EmIncident& inc, const MediumSample& medium) {
    detail::require_consistent_em(inc);
    if (!medium.propagating())
        throw StopbandError("refract_em: medium sample carries no real index");
    if (medium.epsilon.imag() != 0.0 || medium.mu.imag() != 0.0)
        throw std::domain_error("refract_em: lossless medium sample required");

    const double n = medium.n;
    const double mu = medium.mu.real();
    const double k2 = inc.kx * inc.kx + inc.kz * inc.kz;
    const double qz2 = n * n * k2 - inc.kx * inc.kx;

    EmScatterResult r;
    r.qx = inc.kx;
    r.kx_reflect = inc.kx;
    r.kz_reflect = -inc.kz;
    r.sigma = n < 0.0 ? -1 : 1;

    // sigma picks the branch with outgoing energy: group velocity in the
    // medium is antiparallel to Q when n < 0, so Qz < 0 keeps it along +z.
    r.qz = qz2 > 0.0 ? Complex(r.sigma * std::sqrt(qz2))
                     : Complex(0.0, std::sqrt(-qz2)); // decays into z > 0

    const double a = mu * inc.kz;
    const StepAmplitudes amp = step_amplitudes(Complex(a), r.qz);
    r.tau = amp.tau;
    r.rho = amp.rho;

    if (qz2 > 0.0) {
        r.T = std::norm(r.tau) * r.qz.real() / a;
        r.R = std::norm(r.rho);
    } else {
        r.T = 0.0; // no normal energy flux past the interface
        r.R = 1.0;
    }
    return r;
}

// Energy transport direction and speed for the transmitted propagating wave:
// magnitude c/n_g along sigma * Q-hat, i.e. opposite the phase for n < 0.
[[nodiscard]] inline Vec2 em_group_velocity(const EmScatterResult& r, const MediumSample& medium) {
    if (r.evanescent())
        throw std::domain_error("em_group_velocity: no transport on the evanescent branch");
    if (!(medium.n_g >= 1.0))
        throw std::domain_error("em_group_velocity: medium sample carries no group index");
    const double qz = r.qz.real();
    const double q = std::hypot(r.qx, qz);
    const double scale = static_cast<double>(r.sigma) * speed_of_light / (medium.n_g * q);
    return {scale * r.qx, scale * qz};
}

} // namespace kleinref
