#pragma once

#include "arithdyn/candyn/alpha.hpp"
#include "arithdyn/candyn/ks.hpp"
#include "arithdyn/candyn/periodic.hpp"
#include "arithdyn/candyn/tate.hpp"
