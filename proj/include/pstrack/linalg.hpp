#pragma once

#include "pstrack/linalg/lu.hpp"
#include "pstrack/linalg/matrix.hpp"
#include "pstrack/linalg/random_matrix.hpp"
#include "pstrack/linalg/svd.hpp"
