#pragma once

#include "arithdyn/nslattice/bbform.hpp"
#include "arithdyn/nslattice/cone.hpp"
#include "arithdyn/nslattice/form.hpp"
#include "arithdyn/nslattice/lattice.hpp"
#include "arithdyn/nslattice/matrix.hpp"
