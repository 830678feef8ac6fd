#pragma once

// Umbrella header: the whole harmonic-Schwarzian toolkit.

#include "schwarz/errors.hpp"
#include "schwarz/jet.hpp"
#include "schwarz/wirtinger.hpp"
#include "schwarz/mobius.hpp"
#include "schwarz/grid.hpp"
#include "schwarz/expr.hpp"
#include "schwarz/harmonic.hpp"
#include "schwarz/normalize.hpp"
#include "schwarz/equivalence.hpp"
#include "schwarz/map_io.hpp"
