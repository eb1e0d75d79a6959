// Umbrella header.
#pragma once

#include "ringab/common.hpp"
#include "ringab/ring_model.hpp"
#include "ringab/density_states.hpp"
#include "ringab/gauge.hpp"
#include "ringab/dynamics.hpp"
#include "ringab/observables.hpp"
#include "ringab/experiments.hpp"
#include "ringab/cli_io.hpp"
