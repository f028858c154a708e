#pragma once

#include "regime_eq/csv.hpp"
#include "regime_eq/errors.hpp"
#include "regime_eq/model.hpp"
#include "regime_eq/montecarlo.hpp"
#include "regime_eq/odes.hpp"
#include "regime_eq/random.hpp"
#include "regime_eq/regime.hpp"
#include "regime_eq/strategy.hpp"
