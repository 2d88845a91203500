#pragma once

#include "arithdyn/io/chow_parse.hpp"
#include "arithdyn/io/config.hpp"
#include "arithdyn/io/csv.hpp"
#include "arithdyn/io/serialize.hpp"
#include "arithdyn/io/schema.hpp"
