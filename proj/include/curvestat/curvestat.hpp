#pragma once

// Umbrella header.

#include "curvestat/charsum.hpp"
#include "curvestat/curvewin.hpp"
#include "curvestat/errors.hpp"
#include "curvestat/experiment.hpp"
#include "curvestat/ffield.hpp"
#include "curvestat/polyff.hpp"
#include "curvestat/rational.hpp"
#include "curvestat/rng.hpp"
#include "curvestat/rwalk.hpp"
