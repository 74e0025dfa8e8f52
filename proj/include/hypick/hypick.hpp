#pragma once

#include "hypick/blaschke.hpp"
#include "hypick/diff_quotients.hpp"
#include "hypick/errors.hpp"
#include "hypick/mobius.hpp"
#include "hypick/np_solver.hpp"
#include "hypick/random_gen.hpp"
#include "hypick/sampling.hpp"
#include "hypick/self_map.hpp"
#include "hypick/seq_geometry.hpp"
#include "hypick/tolerances.hpp"
#include "hypick/unit_point.hpp"
