#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "kleinref/constants.hpp"
#include "kleinref/errors.hpp"
#include "kleinref/types.hpp"

// Dispersive effective-medium model of a left-handed half-space: Drude
// permittivity, fill-factor Lorentz permeability, and the signed index
// branch n = -sqrt(eps*mu) wherever both responses are negative.
//
// Conventions: fields evolve as e^{i(k.r - w t)}; eps and mu are relative
// (dimensionless); all frequencies are angular (rad/s). The model is
// lossless by default and then eps, mu are exactly real.

namespace kleinref {

struct MediumDispersion {
    double plasma_frequency;             // rad/s, Drude pole of eps
    double magnetic_resonance_frequency; // rad/s, Lorentz pole of mu
    double magnetic_fill_factor;         // dimensionless, in (0,1)
    double electric_loss_rate = 0.0;     // rad/s, >= 0
    double magnetic_loss_rate = 0.0;     // rad/s, >= 0

    MediumDispersion(double plasma, double resonance, double fill,
                     double electric_loss = 0.0, double magnetic_loss = 0.0)
        : plasma_frequency(plasma),
          magnetic_resonance_frequency(resonance),
          magnetic_fill_factor(fill),
          electric_loss_rate(electric_loss),
          magnetic_loss_rate(magnetic_loss) {
        if (!(plasma > 0.0))
            throw std::invalid_argument("MediumDispersion: plasma_frequency must be > 0");
        if (!(resonance > 0.0))
            throw std::invalid_argument("MediumDispersion: magnetic_resonance_frequency must be > 0");
        if (!(fill > 0.0) || !(fill < 1.0))
            throw std::invalid_argument("MediumDispersion: magnetic_fill_factor must lie in (0,1)");
        if (!(electric_loss >= 0.0) || !(magnetic_loss >= 0.0))
            throw std::invalid_argument("MediumDispersion: loss rates must be >= 0");
    }

    [[nodiscard]] bool lossless() const {
        return electric_loss_rate == 0.0 && magnetic_loss_rate == 0.0;
    }

    // Open interval where eps < 0 and mu < 0 simultaneously (lossless model).
    // mu < 0 on (w0, w0/sqrt(1-F)); eps < 0 below the plasma frequency. The
    // construction only yields a double-negative band when it fits under wp.
    [[nodiscard]] std::pair<double, double> negative_index_band() const {
        const double lo = magnetic_resonance_frequency;
        const double hi = magnetic_resonance_frequency / std::sqrt(1.0 - magnetic_fill_factor);
        return {lo, std::min(hi, plasma_frequency)};
    }
};

// One frequency point of the model. In a single-negative window (or for a
// lossy model) there is no real propagating index and n, n_g are NaN; eps
// and mu stay meaningful everywhere.
struct MediumSample {
    double omega = 0.0; // rad/s
    Complex epsilon;    // relative permittivity
    Complex mu;         // relative permeability
    double n = std::numeric_limits<double>::quiet_NaN();   // signed index
    double n_g = std::numeric_limits<double>::quiet_NaN(); // group index

    [[nodiscard]] bool propagating() const { return std::isfinite(n); }
};

namespace detail {

inline void require_positive_omega(double omega, const char* who) {
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw std::domain_error(std::string(who) + ": omega must be finite and > 0");
}

inline void require_off_resonance(const MediumDispersion& m, double omega, const char* who) {
    if (m.lossless() && omega == m.magnetic_resonance_frequency)
        throw ResonanceSingularityError(std::string(who) +
                                        ": lossless permeability diverges at the magnetic resonance");
}

} // namespace detail

// Group index n_g = d(w n)/dw of the lossless model, via the analytic
// derivatives d(eps)/dw = 2 wp^2/w^3 and d(mu)/dw = 2 F w w0^2/(w^2-w0^2)^2.
[[nodiscard]] inline double group_index(const MediumDispersion& m, double omega) {
    detail::require_positive_omega(omega, "group_index");
    if (!m.lossless())
        throw std::domain_error("group_index: defined for the lossless model only");
    detail::require_off_resonance(m, omega, "group_index");

    const double w2 = omega * omega;
    const double wp2 = m.plasma_frequency * m.plasma_frequency;
    const double w02 = m.magnetic_resonance_frequency * m.magnetic_resonance_frequency;
    const double denom = w2 - w02;

    const double eps = 1.0 - wp2 / w2;
    const double mu = 1.0 - m.magnetic_fill_factor * w2 / denom;
    const double prod = eps * mu;
    if (!(prod > 0.0))
        throw StopbandError("group_index: no propagating branch at this frequency");

    const double deps = 2.0 * wp2 / (w2 * omega);
    const double dmu = 2.0 * m.magnetic_fill_factor * omega * w02 / (denom * denom);

    const double sign = eps < 0.0 ? -1.0 : 1.0;
    const double root = std::sqrt(prod);
    const double n = sign * root;
    const double dn = sign * (deps * mu + eps * dmu) / (2.0 * root);
    return n + omega * dn;
}

// Evaluate the model at one angular frequency. Lossless: real eps, mu and
// the signed index n = -sqrt(eps*mu) iff both are negative, +sqrt otherwise;
// single-negative windows carry NaN index. Lossy: complex eps, mu only.
[[nodiscard]] inline MediumSample sample_medium(const MediumDispersion& m, double omega) {
    detail::require_positive_omega(omega, "sample_medium");
    detail::require_off_resonance(m, omega, "sample_medium");

    MediumSample s;
    s.omega = omega;
    const double w2 = omega * omega;
    const double wp2 = m.plasma_frequency * m.plasma_frequency;
    const double w02 = m.magnetic_resonance_frequency * m.magnetic_resonance_frequency;

    if (m.lossless()) {
        const double eps = 1.0 - wp2 / w2;
        const double mu = 1.0 - m.magnetic_fill_factor * w2 / (w2 - w02);
        s.epsilon = eps;
        s.mu = mu;
        if (eps * mu > 0.0) {
            const double sign = eps < 0.0 ? -1.0 : 1.0;
            s.n = sign * std::sqrt(eps * mu);
            s.n_g = group_index(m, omega);
        }
        return s;
    }

    s.epsilon = 1.0 - wp2 / Complex(w2, m.electric_loss_rate * omega);
    s.mu = 1.0 - m.magnetic_fill_factor * w2 / Complex(w2 - w02, m.magnetic_loss_rate * omega);
    return s;
}

// Design point: 5 GHz microwave band.
inline constexpr double design_frequency_hz = 5.0e9;
inline constexpr double design_omega = 2.0 * pi * design_frequency_hz; // rad/s

// Model pinned to the design point: eps(wc) = 1 - 2.4^2 = -4.76 exactly and,
// with F = 1/2, w0 chosen so mu(wc) = -1.222 exactly. This puts the index at
// n(wc) = -2.41179 with a double-negative band of roughly (0.880, 1.245) wc.
[[nodiscard]] inline MediumDispersion fitted_lhm_model() {
    const double fill = 0.5;
    const double mu_c = -1.222;
    const double w0 = design_omega * std::sqrt(1.0 - fill / (1.0 - mu_c));
    return {2.4 * design_omega, w0, fill};
}

} // namespace kleinref
