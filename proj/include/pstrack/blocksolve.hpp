#pragma once

#include "pstrack/blocksolve/error_probe.hpp"
#include "pstrack/blocksolve/schedule.hpp"
#include "pstrack/blocksolve/solver.hpp"
