#pragma once

#include <optional>
#include <vector>

#include "qfa/rational.hpp"

namespace qfa {

using RatMatrix = std::vector<std::vector<Rat>>;
using RatVector = std::vector<Rat>;

/// Solves A x = b exactly; nullopt when inconsistent. When the system is
/// underdetermined, free variables are set to 0.
std::optional<RatVector> ratlin_solve(RatMatrix a, RatVector b);

/// A nonzero vector of the nullspace of A (columns = unknowns), or nullopt
/// when A has full column rank.
std::optional<RatVector> ratlin_nullvector(RatMatrix a, int cols);

}  // namespace qfa
