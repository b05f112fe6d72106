#pragma once

// Umbrella header for the series-solution library.

#include "qhatm/analysis.hpp"
#include "qhatm/engine.hpp"
#include "qhatm/errors.hpp"
#include "qhatm/factors.hpp"
#include "qhatm/frac_series.hpp"
#include "qhatm/problem_library.hpp"
#include "qhatm/problem_spec.hpp"
#include "qhatm/special_functions.hpp"
#include "qhatm/version.hpp"
