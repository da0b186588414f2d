#pragma once

#include <string>

#include "lns/model.hpp"
#include "lns/rng.hpp"

namespace lns {

// Pure-binary multi-knapsack: max sum c_i x_i (negated to minimization)
// subject to a few capacity rows with integer data. The all-zeros point is
// always feasible and the optimum picks a sparse subset of items.
MipModel random_knapsack(int n_binaries, int n_rows, Rng& rng,
                         const std::string& name = "knapsack");

// Pure-binary model with mixed row senses and signed integer coefficients;
// may be infeasible. Exercises solver status agreement.
MipModel random_binary_mip(int n_binaries, Rng& rng, const std::string& name = "binmip");

// Knapsack family with planted structure: a block of high-value items that
// the optimum selects and the LP relaxation prefers, so per-variable
// features carry a learnable signal that transfers across instances.
MipModel planted_knapsack(int n_binaries, Rng& rng, const std::string& name = "planted");

}  // namespace lns
