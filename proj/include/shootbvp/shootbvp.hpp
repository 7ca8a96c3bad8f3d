#pragma once

// Umbrella header.

#include "shootbvp/analysis.hpp"
#include "shootbvp/expr.hpp"
#include "shootbvp/ivp.hpp"
#include "shootbvp/problems.hpp"
#include "shootbvp/shooting.hpp"
