#pragma once

// Umbrella include for the whole library.

#include "kleinref/config.hpp"
#include "kleinref/constants.hpp"
#include "kleinref/em_scatter.hpp"
#include "kleinref/errors.hpp"
#include "kleinref/io.hpp"
#include "kleinref/kg_scatter.hpp"
#include "kleinref/mapping.hpp"
#include "kleinref/media.hpp"
#include "kleinref/scenarios.hpp"
#include "kleinref/step_amplitudes.hpp"
#include "kleinref/types.hpp"
#include "kleinref/wavepacket.hpp"
