#pragma once

#include "hykin/errors.hpp"
#include "hykin/mesh.hpp"
#include "hykin/nodal_basis.hpp"
#include "hykin/dg_space.hpp"
#include "hykin/velocity_grid.hpp"
#include "hykin/reduced.hpp"
#include "hykin/half_moments.hpp"
#include "hykin/kfvs.hpp"
#include "hykin/boundary.hpp"
#include "hykin/kinetic_solver.hpp"
#include "hykin/fluid_solver.hpp"
#include "hykin/decomposition.hpp"
#include "hykin/hybrid.hpp"
#include "hykin/scenarios.hpp"
#include "hykin/io.hpp"
