#pragma once

// Everything: exact algebra, lattice models, boundary data, self-adjoint
// extensions, representation theory, the Gaussian span model and config runs.

#include "qheis/scalar.hpp"
#include "qheis/algebra.hpp"
#include "qheis/expression.hpp"
#include "qheis/lattice.hpp"
#include "qheis/adjoint_domain.hpp"
#include "qheis/extensions.hpp"
#include "qheis/repr.hpp"
#include "qheis/schrodinger.hpp"
#include "qheis/json_io.hpp"
#include "qheis/runner.hpp"
