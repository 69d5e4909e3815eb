#pragma once

#include "pstrack/blocksolve.hpp"
#include "pstrack/evaldiff.hpp"
#include "pstrack/linalg.hpp"
#include "pstrack/newton.hpp"
#include "pstrack/pade.hpp"
#include "pstrack/polysys.hpp"
#include "pstrack/series.hpp"
#include "pstrack/stepsize.hpp"
#include "pstrack/tracker.hpp"
#include "pstrack/xprec.hpp"
