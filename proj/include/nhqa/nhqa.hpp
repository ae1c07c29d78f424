#pragma once

#include "nhqa/csv.hpp"
#include "nhqa/errors.hpp"
#include "nhqa/gamma.hpp"
#include "nhqa/ode.hpp"
#include "nhqa/parabolic_cylinder.hpp"
#include "nhqa/params.hpp"
#include "nhqa/propagate.hpp"
#include "nhqa/schedule.hpp"
#include "nhqa/spectrum.hpp"
#include "nhqa/sweep.hpp"
#include "nhqa/weber.hpp"
