#pragma once

#include "tda/clustering.hpp"
#include "tda/core.hpp"
#include "tda/estimators.hpp"
#include "tda/filtration.hpp"
#include "tda/grid.hpp"
#include "tda/knn.hpp"
#include "tda/metrics.hpp"
#include "tda/parallel.hpp"
#include "tda/persistence.hpp"
#include "tda/sampling.hpp"
#include "tda/statistics.hpp"
#include "tda/summaries.hpp"
