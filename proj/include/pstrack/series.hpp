#pragma once

#include "pstrack/series/truncated_series.hpp"
