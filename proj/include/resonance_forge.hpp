#pragma once

#include "resonance_forge/rational.hpp"
#include "resonance_forge/exact_scalar.hpp"
#include "resonance_forge/poly.hpp"
#include "resonance_forge/bipoly.hpp"
#include "resonance_forge/spectrum.hpp"
#include "resonance_forge/coefficients.hpp"
#include "resonance_forge/telescope.hpp"
#include "resonance_forge/resonant.hpp"
#include "resonance_forge/evolve.hpp"
