#pragma once

#include "spdekit/assembly.hpp"
#include "spdekit/cholesky.hpp"
#include "spdekit/error.hpp"
#include "spdekit/fractional.hpp"
#include "spdekit/inference.hpp"
#include "spdekit/io.hpp"
#include "spdekit/mesh.hpp"
#include "spdekit/non_gaussian.hpp"
#include "spdekit/oracles.hpp"
#include "spdekit/ordering.hpp"
#include "spdekit/pointprocess.hpp"
#include "spdekit/precision.hpp"
#include "spdekit/rng.hpp"
#include "spdekit/sparse.hpp"
