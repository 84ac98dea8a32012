#pragma once

#include <cmath>
#include <stdexcept>

#include "kleinref/constants.hpp"
#include "kleinref/errors.hpp"
#include "kleinref/kg_scatter.hpp"
#include "kleinref/media.hpp"

// Dictionary between the two pictures: a negative-index half-space seen by a
// wave of energy E behaves exactly like a strong potential step, because both
// scatterings share the step_amplitudes form with a = Kz (mu = 1) and the
// same transmitted Qz. Matching |Q| = |n| |K| gives
//
//     massless:  V = E (1 - n)
//     massive:   V = E + sqrt(n^2 (E^2 - m^2 c^4) + m^2 c^4)
//
// and inverting the massless relation per frequency turns a dispersive index
// n(w) into the energy profile E(w) = V / (1 - n(w)) that one fixed step
// shows to a polychromatic packet.

namespace kleinref {

struct MappingSpec {
    double potential;     // V, J
    double mass;          // kg
    double center_energy; // E at the mapping's design frequency, J

    MappingSpec(double potential_j, double mass_kg, double center_energy_j)
        : potential(potential_j), mass(mass_kg), center_energy(center_energy_j) {
        if (!(mass >= 0.0) || !std::isfinite(mass))
            throw std::invalid_argument("MappingSpec: mass must be finite and >= 0");
        const double mc2 = mass * speed_of_light * speed_of_light;
        if (!(center_energy > mc2))
            throw std::invalid_argument("MappingSpec: center energy must exceed m c^2");
        if (!(potential > center_energy + mc2))
            throw std::invalid_argument("MappingSpec: potential must be in the strong regime (V > E + m c^2)");
    }
};

// Step height that reproduces a given negative index at energy E.
[[nodiscard]] inline double index_to_potential(double n, double energy, double mass) {
    if (!(n < 0.0) || !std::isfinite(n))
        throw std::domain_error("index_to_potential: index must be finite and < 0");
    if (!(mass >= 0.0) || !std::isfinite(mass))
        throw std::domain_error("index_to_potential: mass must be finite and >= 0");
    const double mc2 = mass * speed_of_light * speed_of_light;
    if (!(energy > mc2))
        throw std::domain_error("index_to_potential: energy must exceed m c^2");
    if (mass == 0.0) return energy * (1.0 - n);
    const double p2 = (energy - mc2) * (energy + mc2); // c^2 p^2, stable near threshold
    return energy + std::sqrt(n * n * p2 + mc2 * mc2);
}

// Effective index a strong step presents to a particle of energy E:
// n = -|Q|/|K| on the causal branch.
[[nodiscard]] inline double potential_to_index(double potential, double energy, double mass) {
    if (!(mass >= 0.0) || !std::isfinite(mass))
        throw std::domain_error("potential_to_index: mass must be finite and >= 0");
    const double mc2 = mass * speed_of_light * speed_of_light;
    if (!(energy > mc2))
        throw std::domain_error("potential_to_index: energy must exceed m c^2");
    if (!(potential > energy + mc2))
        throw std::domain_error("potential_to_index: step must be strong (V > E + m c^2)");
    const double vminuse = potential - energy; // > mc2 > 0 here
    const double q2 = (vminuse - mc2) * (vminuse + mc2);
    const double k2 = (energy - mc2) * (energy + mc2);
    return -std::sqrt(q2 / k2);
}

// Energy profile a fixed step assigns to each frequency of a dispersive
// negative-index medium: E(w) = V / (1 - n(w)).
[[nodiscard]] inline double counter_dispersive_energy(const MediumDispersion& medium,
                                                      double potential, double omega) {
    if (!(potential > 0.0) || !std::isfinite(potential))
        throw std::domain_error("counter_dispersive_energy: potential must be finite and > 0");
    const MediumSample s = sample_medium(medium, omega);
    if (!s.propagating())
        throw StopbandError("counter_dispersive_energy: no propagating index at omega");
    if (!(s.n < 0.0))
        throw std::domain_error("counter_dispersive_energy: index must be negative at omega");
    return potential / (1.0 - s.n);
}

// Step equivalent to a medium sample for a massless particle of energy E.
[[nodiscard]] inline KleinStep equivalent_step(const MediumSample& s, double energy, double mass = 0.0) {
    if (!s.propagating())
        throw StopbandError("equivalent_step: medium sample carries no real index");
    return {index_to_potential(s.n, energy, mass), mass, energy};
}

} // namespace kleinref
