#pragma once

#include "arithdyn/dynsys/density.hpp"
#include "arithdyn/dynsys/factorize.hpp"
#include "arithdyn/dynsys/orbit.hpp"
#include "arithdyn/dynsys/systems.hpp"
#include "arithdyn/dynsys/wehler.hpp"
