#pragma once

#include "pstrack/xprec/complex.hpp"
#include "pstrack/xprec/dd_real.hpp"
#include "pstrack/xprec/decimal.hpp"
#include "pstrack/xprec/eft.hpp"
#include "pstrack/xprec/qd_real.hpp"
#include "pstrack/xprec/real_traits.hpp"
