#pragma once

#include "inlcondg/bench.hpp"
#include "inlcondg/condg.hpp"
#include "inlcondg/core.hpp"
#include "inlcondg/feasible_set.hpp"
#include "inlcondg/jacobian.hpp"
#include "inlcondg/linsolve.hpp"
#include "inlcondg/solver.hpp"
#include "inlcondg/theory.hpp"
