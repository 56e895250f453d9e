#pragma once

#include "gpgoodwin/data_io.hpp"
#include "gpgoodwin/dynamics.hpp"
#include "gpgoodwin/error.hpp"
#include "gpgoodwin/estimation.hpp"
#include "gpgoodwin/gpd.hpp"
#include "gpgoodwin/gpd_fit.hpp"
#include "gpgoodwin/percent.hpp"
#include "gpgoodwin/quadrature.hpp"
#include "gpgoodwin/regression.hpp"
