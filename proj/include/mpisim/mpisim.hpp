#pragma once

// Umbrella header.

#include "mpisim/channel.hpp"
#include "mpisim/equalizer.hpp"
#include "mpisim/errors.hpp"
#include "mpisim/link_config.hpp"
#include "mpisim/metrics.hpp"
#include "mpisim/phase_noise.hpp"
#include "mpisim/plot.hpp"
#include "mpisim/random.hpp"
#include "mpisim/signal_model.hpp"
#include "mpisim/simulation.hpp"
#include "mpisim/sweep.hpp"
