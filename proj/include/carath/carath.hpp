// Umbrella header.
#pragma once

#include "carath/caratheodory.hpp"
#include "carath/convex.hpp"
#include "carath/core.hpp"
#include "carath/enumerate.hpp"
#include "carath/frank_wolfe.hpp"
#include "carath/geometry.hpp"
#include "carath/json_io.hpp"
#include "carath/lower_bound.hpp"
#include "carath/nash.hpp"
#include "carath/parallel.hpp"
#include "carath/rational.hpp"
#include "carath/rng.hpp"
#include "carath/simplex.hpp"
#include "carath/subgraph.hpp"
