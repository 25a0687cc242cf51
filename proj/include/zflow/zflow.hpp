#pragma once

#include "zflow/error.hpp"
#include "zflow/ztx.hpp"
#include "zflow/controller.hpp"
#include "zflow/plant.hpp"
#include "zflow/analysis.hpp"
#include "zflow/sim.hpp"
#include "zflow/config.hpp"
#include "zflow/trace_io.hpp"
