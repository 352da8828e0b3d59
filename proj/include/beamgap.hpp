#pragma once

// Umbrella header pulling in the whole library.

#include "beamgap/assembly.hpp"
#include "beamgap/bloch.hpp"
#include "beamgap/config.hpp"
#include "beamgap/element.hpp"
#include "beamgap/errors.hpp"
#include "beamgap/homogenization.hpp"
#include "beamgap/io.hpp"
#include "beamgap/lattice.hpp"
#include "beamgap/limit.hpp"
#include "beamgap/mesh.hpp"
#include "beamgap/parallel.hpp"
#include "beamgap/resonance.hpp"
