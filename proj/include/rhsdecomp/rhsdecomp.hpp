#pragma once

// Right-hand-side (resource-share) decomposition of block-structured
// convex programs with exact non-smooth penalties, plus projected
// subgradient solvers for the non-smooth master problem.

#include "rhsdecomp/errors.hpp"
#include "rhsdecomp/linalg.hpp"
#include "rhsdecomp/lp.hpp"
#include "rhsdecomp/master.hpp"
#include "rhsdecomp/penalty.hpp"
#include "rhsdecomp/problem.hpp"
#include "rhsdecomp/problem_io.hpp"
#include "rhsdecomp/subgradient.hpp"
#include "rhsdecomp/testbed.hpp"
