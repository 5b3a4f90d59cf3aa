#pragma once

// Umbrella header for the chainsim library.

#include "chainsim/chain_model.hpp"
#include "chainsim/experiment.hpp"
#include "chainsim/placement.hpp"
#include "chainsim/simulator.hpp"
#include "chainsim/solvers.hpp"
#include "chainsim/svg.hpp"
#include "chainsim/topology.hpp"
