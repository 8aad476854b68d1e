// Umbrella header.
#pragma once

#include "qfridge/matrixcore.hpp"
#include "qfridge/spectrum.hpp"
#include "qfridge/reservoirs.hpp"
#include "qfridge/dynamics.hpp"
#include "qfridge/thermo.hpp"
#include "qfridge/scenario.hpp"
