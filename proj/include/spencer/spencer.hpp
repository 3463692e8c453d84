#pragma once

#include "spencer/error.hpp"
#include "spencer/lie_core.hpp"
#include "spencer/geometry.hpp"
#include "spencer/operator_matrix.hpp"
#include "spencer/assembly.hpp"
#include "spencer/spectral.hpp"
#include "spencer/graded_ring.hpp"
#include "spencer/char_class.hpp"
#include "spencer/csv.hpp"
#include "spencer/oracles.hpp"
