#pragma once

#include "fsind/error.hpp"
#include "fsind/matrix_core.hpp"
#include "fsind/star_algebra.hpp"
#include "fsind/representation.hpp"
#include "fsind/indicator.hpp"
#include "fsind/constructors.hpp"
#include "fsind/coalgebra.hpp"
#include "fsind/json_io.hpp"
