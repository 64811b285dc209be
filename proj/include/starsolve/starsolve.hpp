#pragma once

#include "starsolve/complex_float.hpp"
#include "starsolve/errors.hpp"
#include "starsolve/generators.hpp"
#include "starsolve/matrix.hpp"
#include "starsolve/matrix_ring.hpp"
#include "starsolve/mp_inverse.hpp"
#include "starsolve/oracle.hpp"
#include "starsolve/rational.hpp"
#include "starsolve/rect_embedding.hpp"
#include "starsolve/scalar.hpp"
#include "starsolve/solvers.hpp"
#include "starsolve/star_ring.hpp"
