#pragma once

// Umbrella header.

#include "transit/errors.hpp"
#include "transit/random.hpp"
#include "transit/linalg.hpp"
#include "transit/star_algebra.hpp"
#include "transit/gns.hpp"
#include "transit/commutant.hpp"
#include "transit/transition.hpp"
#include "transit/quadrature.hpp"
#include "transit/commutative_measure.hpp"
#include "transit/weyl_vector.hpp"
#include "transit/instances.hpp"
