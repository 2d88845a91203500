#pragma once

#include "arithdyn/heights/factored.hpp"
#include "arithdyn/heights/heights.hpp"
