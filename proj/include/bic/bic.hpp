#pragma once

#include "bic/channel.hpp"
#include "bic/conditions.hpp"
#include "bic/error.hpp"
#include "bic/experiments.hpp"
#include "bic/geometry.hpp"
#include "bic/info_measures.hpp"
#include "bic/joint_law.hpp"
#include "bic/json_io.hpp"
#include "bic/polytope.hpp"
#include "bic/rational.hpp"
#include "bic/regions.hpp"
#include "bic/sampling.hpp"
#include "bic/simplex.hpp"
#include "bic/variables.hpp"
