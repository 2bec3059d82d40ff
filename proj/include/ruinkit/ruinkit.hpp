#pragma once

// Umbrella header for the ruinkit library: closed-form Gerber-Shiu solvers
// and a Monte Carlo cross-check for diffusion-perturbed renewal risk models.

#include "ruinkit/claims.hpp"
#include "ruinkit/divided_differences.hpp"
#include "ruinkit/errors.hpp"
#include "ruinkit/exppoly.hpp"
#include "ruinkit/gerber_shiu.hpp"
#include "ruinkit/lundberg.hpp"
#include "ruinkit/matrix.hpp"
#include "ruinkit/model.hpp"
#include "ruinkit/model_file.hpp"
#include "ruinkit/phase_type.hpp"
#include "ruinkit/poly.hpp"
#include "ruinkit/rng.hpp"
#include "ruinkit/simulate.hpp"
