#pragma once

#include "units.hpp"
#include "field.hpp"
#include "basis.hpp"
#include "laguerre.hpp"
#include "quadrature.hpp"
#include "transforms.hpp"
#include "special.hpp"
#include "reservoir.hpp"
#include "rng.hpp"
#include "sampler.hpp"
#include "dynamics.hpp"
#include "analysis.hpp"
#include "io.hpp"
#include "config.hpp"
#include "pipeline.hpp"
