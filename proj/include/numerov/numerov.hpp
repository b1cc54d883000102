#pragma once

#include "numerov/cli_io.hpp"
#include "numerov/eigensolver.hpp"
#include "numerov/errors.hpp"
#include "numerov/grid.hpp"
#include "numerov/potentials.hpp"
#include "numerov/recurrence.hpp"
#include "numerov/shooting.hpp"
