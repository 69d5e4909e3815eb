#pragma once

#include "pstrack/tracker/corrector.hpp"
#include "pstrack/tracker/track.hpp"
