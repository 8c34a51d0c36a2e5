#pragma once

#include "mazer/cavity.hpp"
#include "mazer/oracle.hpp"
#include "mazer/phase.hpp"
#include "mazer/quadrature.hpp"
#include "mazer/scattering.hpp"
#include "mazer/wavepacket.hpp"
