#pragma once

#include "arithdyn/error.hpp"
#include "arithdyn/exactreal/algebraic.hpp"
#include "arithdyn/exactreal/bigint.hpp"
#include "arithdyn/exactreal/expr.hpp"
#include "arithdyn/exactreal/interval.hpp"
#include "arithdyn/exactreal/mpfr_bounds.hpp"
#include "arithdyn/exactreal/numberfield.hpp"
#include "arithdyn/exactreal/polynomial.hpp"
