#pragma once

#include "ratchet_levy/errors.hpp"
#include "ratchet_levy/laplace_inversion.hpp"
#include "ratchet_levy/models.hpp"
#include "ratchet_levy/montecarlo.hpp"
#include "ratchet_levy/parallel.hpp"
#include "ratchet_levy/quadrature.hpp"
#include "ratchet_levy/rng.hpp"
#include "ratchet_levy/ruin.hpp"
#include "ratchet_levy/scale.hpp"
#include "ratchet_levy/strategy.hpp"
#include "ratchet_levy/studies.hpp"
#include "ratchet_levy/valuation.hpp"
