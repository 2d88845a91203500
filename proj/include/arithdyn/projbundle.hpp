#pragma once

#include "arithdyn/projbundle/bundle.hpp"
#include "arithdyn/projbundle/chow.hpp"
