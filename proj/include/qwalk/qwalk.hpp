#pragma once
// Umbrella header for the discrete-time quantum walk toolkit.

#include "qwalk/architecture.hpp"
#include "qwalk/band.hpp"
#include "qwalk/core.hpp"
#include "qwalk/io.hpp"
#include "qwalk/protocol.hpp"
#include "qwalk/slm.hpp"
#include "qwalk/two_photon.hpp"
#include "qwalk/walk.hpp"
#include "qwalk/zak.hpp"
