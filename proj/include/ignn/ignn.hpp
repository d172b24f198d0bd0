#pragma once

#include "ignn/autodiff.hpp"
#include "ignn/checkpoint.hpp"
#include "ignn/config.hpp"
#include "ignn/distance.hpp"
#include "ignn/error.hpp"
#include "ignn/experiment.hpp"
#include "ignn/graph.hpp"
#include "ignn/hash.hpp"
#include "ignn/metrics.hpp"
#include "ignn/models.hpp"
#include "ignn/objective.hpp"
#include "ignn/pairs.hpp"
#include "ignn/rng.hpp"
#include "ignn/sparse.hpp"
#include "ignn/tensor.hpp"
