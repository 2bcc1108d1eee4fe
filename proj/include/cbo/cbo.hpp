#pragma once

#include "acqopt.hpp"
#include "benchmarks.hpp"
#include "domain.hpp"
#include "errors.hpp"
#include "harness.hpp"
#include "planner.hpp"
#include "rng.hpp"
#include "scalarize.hpp"
#include "surrogate.hpp"
