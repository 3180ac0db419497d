#pragma once

#include "decaykit/contour.hpp"
#include "decaykit/core.hpp"
#include "decaykit/errors.hpp"
#include "decaykit/evolution.hpp"
#include "decaykit/io.hpp"
#include "decaykit/poles.hpp"
#include "decaykit/quadrature.hpp"
#include "decaykit/relativistic.hpp"
#include "decaykit/selfenergy.hpp"
#include "decaykit/spectral.hpp"
#include "decaykit/vanhove.hpp"
