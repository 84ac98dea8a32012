#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kleinref/constants.hpp"
#include "kleinref/errors.hpp"
#include "kleinref/step_amplitudes.hpp"
#include "kleinref/types.hpp"

// Relativistic scalar particle hitting a sharp potential step V at z = 0.
// Incident side: E^2 = c^2 hbar^2 |K|^2 + m^2 c^4. Transmitted side:
// c^2 hbar^2 |Q|^2 = (E-V)^2 - m^2 c^4, with Qx = Kx pinned by transverse
// momentum conservation, so
//
//     c^2 hbar^2 Qz^2 = c^2 hbar^2 Kz^2 - 2 E V + V^2.
//
// For V > E + m c^2 ("strong" step) Qz^2 can turn positive again: the step
// transmits a propagating wave carrying current back toward the step unless
// the causal branch Qz < 0 is taken, which makes the transmitted group
// velocity c^2 hbar Q/(E-V) point into z > 0. On that branch the reflected
// current exceeds the incident one: T < 0, R > 1.

namespace kleinref {

struct KleinStep {
    double potential; // V, J
    double mass;      // kg, >= 0
    double energy;    // E, J, > m c^2

    KleinStep(double potential_j, double mass_kg, double energy_j)
        : potential(potential_j), mass(mass_kg), energy(energy_j) {
        if (!(potential >= 0.0) || !std::isfinite(potential))
            throw std::invalid_argument("KleinStep: potential must be finite and >= 0");
        if (!(mass >= 0.0) || !std::isfinite(mass))
            throw std::invalid_argument("KleinStep: mass must be finite and >= 0");
        if (!std::isfinite(energy) || !(energy > mass_energy()))
            throw std::invalid_argument("KleinStep: energy must exceed the rest energy m c^2");
    }

    [[nodiscard]] double mass_energy() const { return mass * speed_of_light * speed_of_light; }
};

enum class StepRegime { weak, intermediate, strong };

[[nodiscard]] constexpr const char* to_string(StepRegime r) {
    switch (r) {
        case StepRegime::weak: return "weak";
        case StepRegime::intermediate: return "intermediate";
        case StepRegime::strong: return "strong";
    }
    return "?";
}

// Transmitted-side behavior actually realized at a given incidence.
enum class KgBranch { weak, intermediate, strong_propagating, strong_evanescent };

[[nodiscard]] constexpr const char* to_string(KgBranch b) {
    switch (b) {
        case KgBranch::weak: return "weak";
        case KgBranch::intermediate: return "intermediate";
        case KgBranch::strong_propagating: return "strong-propagating";
        case KgBranch::strong_evanescent: return "strong-evanescent";
    }
    return "?";
}

[[nodiscard]] inline StepRegime classify_regime(const KleinStep& s) {
    const double mc2 = s.mass_energy();
    if (s.potential == s.energy - mc2 || s.potential == s.energy + mc2)
        throw RegimeBoundaryError("classify_regime: V sits exactly on a regime boundary");
    if (s.potential < s.energy - mc2) return StepRegime::weak;
    if (s.potential > s.energy + mc2) return StepRegime::strong;
    return StepRegime::intermediate;
}

// Excess of the step over the pair threshold: dV = V - E - m c^2.
[[nodiscard]] inline double excess_potential(const KleinStep& s) {
    return s.potential - s.energy - s.mass_energy();
}

// Oblique strong steps stay evanescent until dV reaches
// dV* = -m c^2 + sqrt(c^2 hbar^2 Kx^2 + m^2 c^4); hypot keeps the
// subtraction stable for small Kx.
[[nodiscard]] inline double evanescence_threshold(double mass, double kx) {
    if (!(mass >= 0.0) || !std::isfinite(mass))
        throw std::invalid_argument("evanescence_threshold: mass must be finite and >= 0");
    if (!(kx >= 0.0) || !std::isfinite(kx))
        throw std::invalid_argument("evanescence_threshold: kx must be finite and >= 0");
    const double mc2 = mass * speed_of_light * speed_of_light;
    const double transverse = speed_of_light * hbar * kx;
    return std::hypot(transverse, mc2) - mc2;
}

struct KgIncident {
    double kx;      // rad/m, >= 0
    double kz;      // rad/m, > 0
    double theta_i; // rad from the normal
};

[[nodiscard]] inline double kg_wavenumber(const KleinStep& s) {
    const double mc2 = s.mass_energy();
    // |K| = sqrt(E^2 - m^2 c^4)/(c hbar), factored to survive E ~ m c^2.
    return std::sqrt((s.energy - mc2) * (s.energy + mc2)) / (speed_of_light * hbar);
}

[[nodiscard]] inline KgIncident make_kg_incident(const KleinStep& s, double theta_i) {
    if (!(theta_i >= 0.0) || !(theta_i < pi / 2.0))
        throw std::domain_error("make_kg_incident: theta_i must lie in [0, pi/2)");
    const double k = kg_wavenumber(s);
    return {k * std::sin(theta_i), k * std::cos(theta_i), theta_i};
}

struct KgScatterResult {
    double qx = 0.0;         // rad/m, equals the incident kx
    Complex qz;              // rad/m; strong-propagating branch has qz < 0
    double kx_reflect = 0.0; // rad/m
    double kz_reflect = 0.0; // rad/m, = -kz
    Complex tau;             // transmitted amplitude
    Complex rho;             // reflected amplitude
    double T = 0.0;          // current transmittance; negative in the paradox zone
    double R = 0.0;          // current reflectance; exceeds 1 in the paradox zone
    KgBranch branch = KgBranch::weak;
    [[nodiscard]] bool evanescent() const { return qz.real() == 0.0; }
};

namespace detail {

inline void require_consistent_kg(const KleinStep& s, const KgIncident& inc) {
    if (!(inc.kz > 0.0))
        throw std::domain_error("refract_kg: incident kz must be > 0");
    const double k = std::hypot(inc.kx, inc.kz);
    const double k_shell = kg_wavenumber(s);
    if (!(std::abs(k - k_shell) <= 1e-9 * k_shell))
        throw std::domain_error("refract_kg: |K| inconsistent with the energy-momentum relation");
}

} // namespace detail

// Transmitted Qz^2 in wavenumber units: Kz^2 + V(V - 2E)/(c hbar)^2.
[[nodiscard]] inline double kg_qz_squared(const KleinStep& s, const KgIncident& inc) {
    const double ch = speed_of_light * hbar;
    return inc.kz * inc.kz + s.potential * (s.potential - 2.0 * s.energy) / (ch * ch);
}

[[nodiscard]] inline KgScatterResult refract_kg(const KleinStep& s, const KgIncident& inc) {
    detail::require_consistent_kg(s, inc);
    const StepRegime regime = classify_regime(s); // throws on exact boundaries
    const double qz2 = kg_qz_squared(s, inc);

    KgScatterResult r;
    r.qx = inc.kx;
    r.kx_reflect = inc.kx;
    r.kz_reflect = -inc.kz;

    switch (regime) {
        case StepRegime::weak:
            r.branch = KgBranch::weak;
            r.qz = qz2 > 0.0 ? Complex(std::sqrt(qz2)) : Complex(0.0, std::sqrt(-qz2));
            break;
        case StepRegime::intermediate:
            // Qz^2 < 0 throughout this regime; max() absorbs the one-ulp
            // rounding possible within a few ulp of a boundary.
            r.branch = KgBranch::intermediate;
            r.qz = Complex(0.0, std::sqrt(std::max(0.0, -qz2)));
            break;
        case StepRegime::strong:
            if (qz2 > 0.0) {
                r.branch = KgBranch::strong_propagating;
                r.qz = -std::sqrt(qz2); // causal branch: group velocity into z > 0
            } else {
                r.branch = KgBranch::strong_evanescent;
                r.qz = Complex(0.0, std::sqrt(-qz2));
            }
            break;
    }

    const StepAmplitudes amp = step_amplitudes(Complex(inc.kz), r.qz);
    r.tau = amp.tau;
    r.rho = amp.rho;

    if (r.qz.real() != 0.0) {
        r.T = std::norm(r.tau) * r.qz.real() / inc.kz;
        r.R = std::norm(r.rho);
    } else {
        r.T = 0.0;
        r.R = 1.0;
    }
    return r;
}

// Group velocity of a transmitted propagating wave: c^2 hbar Q / (E - V).
// Both factors flip sign across the strong threshold, so the causal branch
// keeps v_z > 0 on either side.
[[nodiscard]] inline Vec2 kg_group_velocity(const KleinStep& s, const KgScatterResult& r) {
    if (r.evanescent())
        throw std::domain_error("kg_group_velocity: no transport on an evanescent branch");
    if (s.energy == s.potential)
        throw std::domain_error("kg_group_velocity: E == V, transmitted energy is degenerate");
    const double f = speed_of_light * speed_of_light * hbar / (s.energy - s.potential);
    return {f * r.qx, f * r.qz.real()};
}

// Conserved current density for the scalar field: j = (hbar/m) Im(psi* grad psi),
// reported without the hbar/m prefactor when m == 0 (only ratios matter there).
[[nodiscard]] inline Vec2 probability_current(Complex psi, Complex ddx, Complex ddz, double mass) {
    if (!(mass >= 0.0) || !std::isfinite(mass))
        throw std::invalid_argument("probability_current: mass must be finite and >= 0");
    double jx = std::imag(std::conj(psi) * ddx);
    double jz = std::imag(std::conj(psi) * ddz);
    if (mass > 0.0) {
        const double scale = hbar / mass;
        jx *= scale;
        jz *= scale;
    }
    return {jx, jz};
}

} // namespace kleinref
