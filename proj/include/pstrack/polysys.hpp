#pragma once

#include "pstrack/polysys/generators.hpp"
#include "pstrack/polysys/power_table.hpp"
#include "pstrack/polysys/system.hpp"
#include "pstrack/polysys/text_format.hpp"
