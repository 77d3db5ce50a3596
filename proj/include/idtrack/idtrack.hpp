#pragma once

#include "idtrack/baselines.hpp"
#include "idtrack/config.hpp"
#include "idtrack/control.hpp"
#include "idtrack/fusion.hpp"
#include "idtrack/geometry.hpp"
#include "idtrack/metrics.hpp"
#include "idtrack/rng.hpp"
#include "idtrack/runner.hpp"
#include "idtrack/scenarios.hpp"
#include "idtrack/sensors.hpp"
#include "idtrack/trace.hpp"
#include "idtrack/world.hpp"
