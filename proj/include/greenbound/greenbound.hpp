#pragma once

#include "greenbound/driver.hpp"
#include "greenbound/errors.hpp"
#include "greenbound/greens.hpp"
#include "greenbound/grid.hpp"
#include "greenbound/iteration.hpp"
#include "greenbound/lambda_model.hpp"
#include "greenbound/oracle.hpp"
#include "greenbound/potential.hpp"
