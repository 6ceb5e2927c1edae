#pragma once

// Umbrella header for the open-chain algebraic Bethe ansatz workbench.

#include "openbethe/types.hpp"
#include "openbethe/tensor.hpp"
#include "openbethe/chain.hpp"
#include "openbethe/rmatrix.hpp"
#include "openbethe/monodromy.hpp"
#include "openbethe/boundary.hpp"
#include "openbethe/sklyanin.hpp"
#include "openbethe/bethe.hpp"
#include "openbethe/gaudin.hpp"
#include "openbethe/spectra.hpp"
