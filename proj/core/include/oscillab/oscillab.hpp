#pragma once

#include "oscillab/carleman.hpp"
#include "oscillab/derivlab.hpp"
#include "oscillab/envelopes.hpp"
#include "oscillab/errors.hpp"
#include "oscillab/flatness.hpp"
#include "oscillab/iterlog.hpp"
#include "oscillab/ladder.hpp"
#include "oscillab/numerics.hpp"
#include "oscillab/phases.hpp"
#include "oscillab/plateau.hpp"
#include "oscillab/quadrature.hpp"
