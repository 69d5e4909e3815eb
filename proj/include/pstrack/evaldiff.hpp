#pragma once

#include "pstrack/evaldiff/point_eval.hpp"
#include "pstrack/evaldiff/product_scheme.hpp"
#include "pstrack/evaldiff/series_eval.hpp"
#include "pstrack/work_crew.hpp"
