#pragma once

#include "oats/decomposition.hpp"
#include "oats/echo.hpp"
#include "oats/husimi.hpp"
#include "oats/oracle.hpp"
#include "oats/protocols.hpp"
#include "oats/spin_state.hpp"
