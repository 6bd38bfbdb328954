#pragma once

#include "dkaf/analysis.hpp"
#include "dkaf/config.hpp"
#include "dkaf/csv.hpp"
#include "dkaf/errors.hpp"
#include "dkaf/kernel_filters.hpp"
#include "dkaf/kernels.hpp"
#include "dkaf/linear_filters.hpp"
#include "dkaf/network.hpp"
#include "dkaf/rng.hpp"
#include "dkaf/simulation.hpp"
