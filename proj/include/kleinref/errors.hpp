#pragma once

#include <stdexcept>

namespace kleinref {

// Physical-domain failures. All derive from std::domain_error so callers can
// catch the whole family; the concrete types exist for tests and for precise
// CLI diagnostics.

// Lossless medium sampled exactly at the magnetic resonance frequency.
struct ResonanceSingularityError : std::domain_error {
    using std::domain_error::domain_error;
};

// Operation needs a propagating branch but the sample sits in a
// single-negative window (eps*mu <= 0, no real index).
struct StopbandError : std::domain_error {
    using std::domain_error::domain_error;
};

// Interface amplitude denominator is exactly zero (a + b == 0).
struct DegenerateDenominatorError : std::domain_error {
    using std::domain_error::domain_error;
};

// Step parameters sit exactly on a regime boundary (V == E -/+ m c^2).
struct RegimeBoundaryError : std::domain_error {
    using std::domain_error::domain_error;
};

// Density distribution has no usable principal axis (zero or uniform
// density, or isotropic second moments).
struct UndefinedAxisError : std::domain_error {
    using std::domain_error::domain_error;
};

// Grid too coarse for the spectrum it is asked to hold.
struct SamplingError : std::domain_error {
    using std::domain_error::domain_error;
};

// Bad configuration input (unknown key, unparsable value, out-of-range
// setting). Distinct from domain errors: points at user input, not physics.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem failure while reading or writing artifacts.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace kleinref
