#pragma once

// Mean estimation for stationary series by kriging with a negative
// correlation model: empirical variography, one-parameter correlation
// fit, bordered-system weights and the (t, j) constraint search.

#include "krigmean/csv.hpp"
#include "krigmean/empirical.hpp"
#include "krigmean/errors.hpp"
#include "krigmean/estimator.hpp"
#include "krigmean/fit.hpp"
#include "krigmean/kriging.hpp"
#include "krigmean/linalg.hpp"
#include "krigmean/model.hpp"
#include "krigmean/montecarlo.hpp"
#include "krigmean/pipeline.hpp"
#include "krigmean/scan.hpp"
#include "krigmean/series.hpp"
