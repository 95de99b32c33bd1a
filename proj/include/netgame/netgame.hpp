#pragma once

#include "netgame/bounds.hpp"
#include "netgame/checks.hpp"
#include "netgame/config.hpp"
#include "netgame/dynamics.hpp"
#include "netgame/equilibrium.hpp"
#include "netgame/expected.hpp"
#include "netgame/experiment.hpp"
#include "netgame/io.hpp"
#include "netgame/game.hpp"
#include "netgame/metrics.hpp"
#include "netgame/network.hpp"
#include "netgame/response.hpp"
#include "netgame/rng.hpp"
#include "netgame/schedule.hpp"
#include "netgame/strategy_set.hpp"
#include "netgame/types.hpp"
