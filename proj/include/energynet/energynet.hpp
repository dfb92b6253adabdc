#pragma once

#include "energynet/backprop_bridge.hpp"
#include "energynet/dataset.hpp"
#include "energynet/dynamics.hpp"
#include "energynet/error.hpp"
#include "energynet/hard_sigmoid.hpp"
#include "energynet/learning.hpp"
#include "energynet/model.hpp"
#include "energynet/network.hpp"
#include "energynet/state.hpp"
#include "energynet/topology.hpp"
