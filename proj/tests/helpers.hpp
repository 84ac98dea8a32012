#pragma once

#include <cmath>
#include <cstring>
#include <random>

#include "kleinref/kleinref.hpp"

// Shared bits for the test suite: deterministic draw helpers (fixed seeds
// live in the individual tests) and bit-exact comparison.

namespace testutil {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Bitwise equality, distinguishing -0.0 from 0.0 and matching NaN payloads.
inline bool bit_equal(double a, double b) {
    return std::memcmp(&a, &b, sizeof(double)) == 0;
}

inline bool close_rel(double a, double b, double tol) {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= tol * scale;
}

} // namespace testutil
