#pragma once

#include "kleinref/errors.hpp"
#include "kleinref/types.hpp"

// Shared two-branch matching at a planar step. Both scattering pictures in
// this library reduce to the same 2x2 continuity problem
//
//     1 + rho = tau              (value continuous at z = 0)
//     a (1 - rho) = b tau        (weighted slope continuous at z = 0)
//
// with picture-specific weights a (incident side) and b (transmitted side).
// Solving gives tau = 2a/(a+b), rho = (a-b)/(a+b). Keeping one solver means
// the pictures can only disagree through their inputs, never the algebra.

namespace kleinref {

struct StepAmplitudes {
    Complex tau; // transmitted amplitude
    Complex rho; // reflected amplitude
};

[[nodiscard]] inline StepAmplitudes step_amplitudes(Complex a, Complex b) {
    const Complex denom = a + b;
    if (denom == Complex{})
        throw DegenerateDenominatorError("step_amplitudes: a + b == 0, amplitudes diverge");
    return {2.0 * a / denom, (a - b) / denom};
}

} // namespace kleinref
