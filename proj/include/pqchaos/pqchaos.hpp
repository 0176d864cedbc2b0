#pragma once

#include "pqchaos/core.hpp"
#include "pqchaos/dephasing.hpp"
#include "pqchaos/diagnostics.hpp"
#include "pqchaos/parallel.hpp"
#include "pqchaos/pqc.hpp"
#include "pqchaos/random.hpp"
#include "pqchaos/rmt.hpp"
#include "pqchaos/spectral.hpp"
#include "pqchaos/states.hpp"
#include "pqchaos/superoperator.hpp"
#include "pqchaos/time_grid.hpp"
#include "pqchaos/version.hpp"
